#pragma once

// Recovering a generalized character from a multiplicative functional phi on
// C_c(G):  alpha(s) = phi(tau_s f) / phi(f)  for any f with phi(f) != 0.
// On discrete groups the point masses give alpha(s) = phi(delta_s) directly.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcachar/cc_function.hpp"
#include "lcachar/characters.hpp"
#include "lcachar/error.hpp"
#include "lcachar/group.hpp"

namespace lcachar {

inline constexpr double kDefaultDenomTol = 1e-9;

/// An evaluation oracle C_c(G) -> C. Oracles must be pure.
class MultiplicativeFunctional {
 public:
  using Eval = std::function<cplx(const CcFunction&)>;

  MultiplicativeFunctional(GroupSpec group, Eval eval) : group_(std::move(group)), eval_(std::move(eval)) {}

  const GroupSpec& group() const noexcept { return group_; }

  cplx operator()(const CcFunction& f) const {
    if (!(f.group() == group_)) throw Error(Errc::SpecMismatch, "function lives on a different group");
    return eval_(f);
  }

 private:
  GroupSpec group_;
  Eval eval_;
};

/// phi_alpha(f) = f^(alpha).
inline MultiplicativeFunctional gelfand_functional(const GroupSpec& group, GenChar alpha) {
  require_conforms(group, alpha);
  return MultiplicativeFunctional(group, [alpha = std::move(alpha)](const CcFunction& f) {
    return gelfand_transform(f, alpha);
  });
}

/// Largest |phi(f*g) - phi(f) phi(g)| / (1 + |phi(f)| |phi(g)|) over the probe pairs.
inline double multiplicativity_defect(const MultiplicativeFunctional& phi,
                                      const std::vector<std::pair<CcFunction, CcFunction>>& probes) {
  double worst = 0.0;
  for (const auto& [f, g] : probes) {
    const cplx pf = phi(f);
    const cplx pg = phi(g);
    const cplx pfg = phi(convolve(f, g));
    worst = std::max(worst, std::abs(pfg - pf * pg) / (1.0 + std::abs(pf) * std::abs(pg)));
  }
  return worst;
}

inline void require_multiplicative(const MultiplicativeFunctional& phi,
                                   const std::vector<std::pair<CcFunction, CcFunction>>& probes, double tol) {
  if (probes.empty()) throw Error(Errc::EmptyProbeSet, "multiplicativity check needs probe pairs");
  const double defect = multiplicativity_defect(phi, probes);
  if (!(defect <= tol)) {
    throw Error(Errc::NotMultiplicative, "probe defect " + std::to_string(defect) + " exceeds " + std::to_string(tol));
  }
}

/// Lattice key of a grid-aligned element: real coordinates in step units,
/// then integer coordinates, then residues.
using GridKey = std::vector<std::int64_t>;

inline GridKey grid_key(const GroupElement& t, const std::vector<double>& real_step) {
  GridKey key;
  key.reserve(t.real.size() + t.ints.size() + t.residues.size());
  for (std::size_t j = 0; j < t.real.size(); ++j) key.push_back(grid_shift(t.real[j], real_step[j]));
  key.insert(key.end(), t.ints.begin(), t.ints.end());
  key.insert(key.end(), t.residues.begin(), t.residues.end());
  return key;
}

struct RecoveredCharacter {
  GroupSpec group;
  std::vector<double> real_step;
  std::vector<GroupElement> sample_points;
  std::vector<cplx> values;
  /// max |alpha(s+t) - alpha(s) alpha(t)| over pairs with s, t, s+t all sampled.
  double residual = 0.0;

  std::optional<cplx> value_at(const GroupElement& t) const {
    const auto key = grid_key(t, real_step);
    for (std::size_t i = 0; i < sample_points.size(); ++i) {
      if (grid_key(sample_points[i], real_step) == key) return values[i];
    }
    return std::nullopt;
  }
};

inline double homomorphism_residual(const GroupSpec& group, const std::vector<double>& real_step,
                                    const std::vector<GroupElement>& points, const std::vector<cplx>& values) {
  std::map<GridKey, std::size_t> index;
  std::vector<GridKey> keys;
  keys.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    keys.push_back(grid_key(points[i], real_step));
    index.emplace(keys.back(), i);
  }
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  double worst = 0.0;
  GridKey sum(m + n + group.torsion_rank());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i; j < points.size(); ++j) {
      for (std::size_t a = 0; a < sum.size(); ++a) {
        sum[a] = keys[i][a] + keys[j][a];
        if (a >= m + n) sum[a] = reduce_mod(sum[a], group.cyclic_orders()[a - m - n]);
      }
      const auto it = index.find(sum);
      if (it == index.end()) continue;
      worst = std::max(worst, std::abs(values[it->second] - values[i] * values[j]));
    }
  }
  return worst;
}

inline RecoveredCharacter recover_character(const MultiplicativeFunctional& phi, const CcFunction& f,
                                            const std::vector<GroupElement>& samples,
                                            double denom_tol = kDefaultDenomTol) {
  const cplx denom = phi(f);
  if (!(std::abs(denom) > denom_tol)) {
    throw Error(Errc::ZeroDenominator, "|phi(f)| = " + std::to_string(std::abs(denom)) + " is below tolerance");
  }
  RecoveredCharacter rc;
  rc.group = phi.group();
  rc.real_step = f.real_step();
  rc.sample_points = samples;
  rc.values.reserve(samples.size());
  for (const auto& s : samples) {
    const cplx v = phi(translate(f, s)) / denom;
    if (v == 0.0) throw Error(Errc::ZeroDenominator, "phi vanishes on a translate of f");
    rc.values.push_back(v);
  }
  rc.residual = homomorphism_residual(rc.group, rc.real_step, rc.sample_points, rc.values);
  return rc;
}

/// alpha(s) = phi(delta_s) on a discrete group.
inline RecoveredCharacter discrete_recover(const MultiplicativeFunctional& phi, const std::vector<GroupElement>& samples) {
  const auto& group = phi.group();
  if (!group.is_discrete()) throw Error(Errc::DiracOnContinuousFactor, "discrete recovery needs real_rank = 0");
  RecoveredCharacter rc;
  rc.group = group;
  rc.sample_points = samples;
  rc.values.reserve(samples.size());
  for (const auto& s : samples) rc.values.push_back(phi(delta(group, s)));
  rc.residual = homomorphism_residual(group, rc.real_step, rc.sample_points, rc.values);
  return rc;
}

/// max over s of |phi(tau_s f)/phi(f) - phi(tau_s g)/phi(g)|.
inline double independence_check(const MultiplicativeFunctional& phi, const CcFunction& f, const CcFunction& g,
                                 const std::vector<GroupElement>& samples, double denom_tol = kDefaultDenomTol) {
  const cplx pf = phi(f);
  const cplx pg = phi(g);
  if (!(std::abs(pf) > denom_tol) || !(std::abs(pg) > denom_tol)) {
    throw Error(Errc::ZeroDenominator, "probe has vanishing functional value");
  }
  double worst = 0.0;
  for (const auto& s : samples) {
    worst = std::max(worst, std::abs(phi(translate(f, s)) / pf - phi(translate(g, s)) / pg));
  }
  return worst;
}

/// Reads off (z, w, c) from the recovered values at unit steps:
///   z_j = Log(alpha(h_j e_j) / alpha(0)) / h_j   (principal branch),
///   w_j = alpha(e_j) / alpha(0),
///   c_i = nearest d_i-th root of unity to alpha(g_i) / alpha(0).
inline GenChar fit_parametric(const RecoveredCharacter& rc) {
  const auto& group = rc.group;
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  const auto zero = identity(group);
  const auto base = rc.value_at(zero);
  if (!base) throw Error(Errc::MissingSamples, "recovered values lack the identity");

  auto unit_step = [&](std::size_t axis) {
    auto t = zero;
    if (axis < m) {
      t.real[axis] = rc.real_step[axis];
    } else if (axis < m + n) {
      t.ints[axis - m] = 1;
    } else {
      t.residues[axis - m - n] = 1;
    }
    const auto v = rc.value_at(t);
    if (!v) throw Error(Errc::MissingSamples, "recovered values lack a unit step on axis " + std::to_string(axis));
    return *v / *base;
  };

  GenChar out = trivial_character(group);
  for (std::size_t j = 0; j < m; ++j) {
    const cplx ratio = unit_step(j);
    if (std::abs(std::arg(ratio)) >= std::numbers::pi * (1.0 - 1e-12) ||
        (ratio.imag() == 0.0 && ratio.real() < 0.0)) {
      throw Error(Errc::BranchAmbiguity, "step ratio on the negative real axis; |Im z| h >= pi");
    }
    out.z[j] = std::log(ratio) / rc.real_step[j];
  }
  for (std::size_t j = 0; j < n; ++j) out.w[j] = unit_step(m + j);
  for (std::size_t i = 0; i < group.torsion_rank(); ++i) {
    const auto d = group.cyclic_orders()[i];
    const double turns = std::arg(unit_step(m + n + i)) / (2.0 * std::numbers::pi);
    out.dual_residues[i] = reduce_mod(static_cast<std::int64_t>(std::llround(turns * static_cast<double>(d))), d);
  }
  return out;
}

/// max over samples of |alpha(s) - recovered(s)|.
inline double fit_error(const RecoveredCharacter& rc, const GenChar& alpha) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rc.sample_points.size(); ++i) {
    worst = std::max(worst, std::abs(evaluate(rc.group, alpha, rc.sample_points[i]) - rc.values[i]));
  }
  return worst;
}

/// beta in B(alpha; eps; f_1..f_n): every probe transform within eps.
inline bool gelfand_ball_member(const GenChar& beta, const GenChar& alpha, double eps,
                                const std::vector<CcFunction>& probes) {
  if (probes.empty()) throw Error(Errc::EmptyProbeSet, "Gel'fand ball needs at least one probe");
  if (!(eps > 0.0)) throw Error(Errc::InvalidEpsilon, "eps must be positive");
  for (const auto& f : probes) {
    if (!(std::abs(gelfand_transform(f, beta) - gelfand_transform(f, alpha)) < eps)) return false;
  }
  return true;
}

/// Grid-aligned sample set: real coordinates k h_j with |k h_j| <= real_span,
/// integer coordinates in [-int_span, int_span], every residue.
inline std::vector<GroupElement> grid_samples(const GroupSpec& group, const std::vector<double>& real_step,
                                              double real_span, std::int64_t int_span) {
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  std::vector<std::vector<std::int64_t>> axes;
  for (std::size_t j = 0; j < m; ++j) {
    const auto k = last_grid_index_at_or_below(real_span, real_step[j]);
    std::vector<std::int64_t> ax;
    for (auto i = -k; i <= k; ++i) ax.push_back(i);
    axes.push_back(std::move(ax));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::int64_t> ax;
    for (auto i = -int_span; i <= int_span; ++i) ax.push_back(i);
    axes.push_back(std::move(ax));
  }
  for (auto d : group.cyclic_orders()) {
    std::vector<std::int64_t> ax;
    for (std::int64_t r = 0; r < d; ++r) ax.push_back(r);
    axes.push_back(std::move(ax));
  }
  std::vector<GroupElement> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    GroupElement t;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto c = axes[a][idx[a]];
      if (a < m) {
        t.real.push_back(static_cast<double>(c) * real_step[a]);
      } else if (a < m + n) {
        t.ints.push_back(c);
      } else {
        t.residues.push_back(c);
      }
    }
    out.push_back(std::move(t));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace lcachar
