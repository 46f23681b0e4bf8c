#pragma once

// Generalized characters: continuous homomorphisms G -> C\{0}.
//
// On R^m x Z^n x prod Z_{d_i} every such map has the form
//   alpha(t) = exp(sum z_j t_j) * prod w_j^{k_j} * prod exp(2 pi i c_i r_i / d_i)
// and H(G) multiplies pointwise, i.e. adds z, multiplies w and adds c mod d.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "lcachar/error.hpp"
#include "lcachar/group.hpp"
#include "lcachar/lemma_escape.hpp"

namespace lcachar {

using cplx = std::complex<double>;

struct GenChar {
  std::vector<cplx> z;
  std::vector<cplx> w;
  std::vector<std::int64_t> dual_residues;

  friend bool operator==(const GenChar&, const GenChar&) = default;
};

inline bool conforms(const GroupSpec& g, const GenChar& a) noexcept {
  if (a.z.size() != static_cast<std::size_t>(g.real_rank())) return false;
  if (a.w.size() != static_cast<std::size_t>(g.int_rank())) return false;
  if (a.dual_residues.size() != g.torsion_rank()) return false;
  for (const auto& w : a.w) {
    if (!(std::abs(w) > 0.0)) return false;
  }
  for (std::size_t i = 0; i < a.dual_residues.size(); ++i) {
    if (a.dual_residues[i] < 0 || a.dual_residues[i] >= g.cyclic_orders()[i]) return false;
  }
  return true;
}

inline void require_conforms(const GroupSpec& g, const GenChar& a) {
  if (!conforms(g, a)) throw Error(Errc::SpecMismatch, "character does not belong to H(" + g.describe() + ")");
}

inline GenChar make_character(const GroupSpec& g, std::vector<cplx> z, std::vector<cplx> w = {},
                              std::vector<std::int64_t> dual_residues = {}) {
  if (z.size() != static_cast<std::size_t>(g.real_rank()) || w.size() != static_cast<std::size_t>(g.int_rank()) ||
      dual_residues.size() != g.torsion_rank()) {
    throw Error(Errc::SpecMismatch, "parameter counts do not match " + g.describe());
  }
  for (const auto& x : w) {
    if (!(std::abs(x) > 0.0)) throw Error(Errc::InvalidArgument, "w parameters must be nonzero");
  }
  for (std::size_t i = 0; i < dual_residues.size(); ++i) {
    dual_residues[i] = reduce_mod(dual_residues[i], g.cyclic_orders()[i]);
  }
  return GenChar{std::move(z), std::move(w), std::move(dual_residues)};
}

inline GenChar trivial_character(const GroupSpec& g) {
  return GenChar{std::vector<cplx>(g.real_rank(), 0.0), std::vector<cplx>(g.int_rank(), 1.0),
                 std::vector<std::int64_t>(g.torsion_rank(), 0)};
}

/// w^k by binary powering; exact for small integer-valued w.
inline cplx ipow(cplx base, std::int64_t k) {
  if (k < 0) {
    base = 1.0 / base;
    k = -k;
  }
  cplx out = 1.0;
  while (k > 0) {
    if (k & 1) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

/// exp(2 pi i k / d) for k already reduced mod d; quarter turns are exact.
inline cplx root_of_unity(std::int64_t k, std::int64_t d) {
  if ((4 * k) % d == 0) {
    switch ((4 * k) / d) {
      case 0: return 1.0;
      case 1: return cplx(0.0, 1.0);
      case 2: return -1.0;
      default: return cplx(0.0, -1.0);
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
}

inline cplx evaluate(const GroupSpec& g, const GenChar& a, const GroupElement& t) {
  require_conforms(g, a);
  require_conforms(g, t);
  cplx exponent = 0.0;
  for (std::size_t j = 0; j < t.real.size(); ++j) exponent += a.z[j] * t.real[j];
  cplx value = std::exp(exponent);
  for (std::size_t j = 0; j < t.ints.size(); ++j) value *= ipow(a.w[j], t.ints[j]);
  for (std::size_t i = 0; i < t.residues.size(); ++i) {
    const auto d = g.cyclic_orders()[i];
    value *= root_of_unity(reduce_mod(a.dual_residues[i] * t.residues[i], d), d);
  }
  return value;
}

inline GenChar combine(const GroupSpec& g, const GenChar& a, const GenChar& b) {
  require_conforms(g, a);
  require_conforms(g, b);
  GenChar out = a;
  for (std::size_t j = 0; j < out.z.size(); ++j) out.z[j] += b.z[j];
  for (std::size_t j = 0; j < out.w.size(); ++j) out.w[j] *= b.w[j];
  for (std::size_t i = 0; i < out.dual_residues.size(); ++i) {
    out.dual_residues[i] = reduce_mod(out.dual_residues[i] + b.dual_residues[i], g.cyclic_orders()[i]);
  }
  return out;
}

inline GenChar invert(const GroupSpec& g, const GenChar& a) {
  require_conforms(g, a);
  GenChar out = a;
  for (auto& z : out.z) z = -z;
  for (auto& w : out.w) w = 1.0 / w;
  for (std::size_t i = 0; i < out.dual_residues.size(); ++i) {
    out.dual_residues[i] = reduce_mod(-out.dual_residues[i], g.cyclic_orders()[i]);
  }
  return out;
}

/// True iff alpha maps into the unit circle, i.e. lies in the dual group.
inline bool is_unitary(const GenChar& a, double tol = 0.0) {
  if (tol < 0.0) throw Error(Errc::InvalidArgument, "tolerance must be non-negative");
  for (const auto& z : a.z) {
    if (std::abs(z.real()) > tol) return false;
  }
  for (const auto& w : a.w) {
    if (std::abs(std::abs(w) - 1.0) > tol) return false;
  }
  return true;
}

/// Every character of K = prod Z_{d_i}; the dual residue tuple runs with the
/// last factor fastest.
inline std::vector<GenChar> enumerate_characters(const std::vector<std::int64_t>& orders) {
  const GroupSpec k(0, 0, orders);
  std::vector<GenChar> out;
  for (auto& e : torsion_elements(k)) out.push_back(GenChar{{}, {}, std::move(e.residues)});
  return out;
}

// ---------------------------------------------------------------------------
// T_m = { alpha : |alpha(s) - 1| < 1/m for all s in the closed box }

struct TmSpec {
  int m = 2;
  GeneratingBox box;
  int sample_density = 1024;
};

inline void validate(const GroupSpec& g, const TmSpec& spec) {
  require_valid_m(spec.m);
  if (spec.sample_density < 2) throw Error(Errc::InvalidArgument, "sample_density must be >= 2");
  if (spec.box.real_halfwidths.size() != static_cast<std::size_t>(g.real_rank())) {
    throw Error(Errc::SpecMismatch, "box does not match group");
  }
}

/// Sampled sup of |alpha(s) - 1| over the closed box: sample_density points
/// per real axis (endpoints included), every allowed Z step, all of K.
inline double tm_sup_estimate(const GroupSpec& g, const GenChar& a, const TmSpec& spec) {
  validate(g, spec);
  require_conforms(g, a);

  // Per-axis factor values; alpha on a box point is their product.
  std::vector<std::vector<cplx>> axes;
  for (int j = 0; j < g.real_rank(); ++j) {
    const double u = spec.box.real_halfwidths[j];
    std::vector<cplx> vals(spec.sample_density);
    for (int i = 0; i < spec.sample_density; ++i) {
      const double x = -u + 2.0 * u * i / (spec.sample_density - 1);
      vals[i] = std::exp(a.z[j] * x);
    }
    axes.push_back(std::move(vals));
  }
  for (int j = 0; j < g.int_rank(); ++j) {
    if (spec.box.int_reach == 0) {
      axes.push_back({1.0});
    } else {
      axes.push_back({1.0 / a.w[j], 1.0, a.w[j]});
    }
  }
  for (std::size_t i = 0; i < g.torsion_rank(); ++i) {
    const auto d = g.cyclic_orders()[i];
    std::vector<cplx> vals;
    for (std::int64_t r = 0; r < d; ++r) vals.push_back(root_of_unity(reduce_mod(a.dual_residues[i] * r, d), d));
    axes.push_back(std::move(vals));
  }
  if (axes.empty()) return 0.0;

  // Odometer over the product, carrying partial products per level.
  const std::size_t depth = axes.size();
  std::vector<std::size_t> idx(depth, 0);
  std::vector<cplx> partial(depth + 1, 1.0);
  for (std::size_t l = 0; l < depth; ++l) partial[l + 1] = partial[l] * axes[l][0];
  double sup = 0.0;
  while (true) {
    sup = std::max(sup, std::abs(partial[depth] - 1.0));
    std::size_t level = depth;
    while (level > 0) {
      --level;
      if (++idx[level] < axes[level].size()) break;
      idx[level] = 0;
      if (level == 0) return sup;
    }
    for (std::size_t l = level; l < depth; ++l) partial[l + 1] = partial[l] * axes[l][idx[l]];
  }
}

inline bool tm_membership(const GroupSpec& g, const GenChar& a, const TmSpec& spec, double tol = 0.0) {
  return tm_sup_estimate(g, a, spec) < 1.0 / spec.m + tol;
}

struct GrowthBounds {
  double lo = 1.0;
  double hi = 1.0;
  double modulus = 1.0;
  std::int64_t word_length = 0;
};

/// (1 - 1/m)^p <= |alpha(t)| <= (1 + 1/m)^p for alpha in T_m, p the word length.
inline GrowthBounds growth_bounds(const GroupSpec& g, const GenChar& a, const GroupElement& t, const TmSpec& spec) {
  if (!tm_membership(g, a, spec)) throw Error(Errc::NotInTm, "character is not in T_m");
  GrowthBounds out;
  out.word_length = word_length(g, t, spec.box);
  const double inv_m = 1.0 / spec.m;
  out.lo = std::pow(1.0 - inv_m, static_cast<double>(out.word_length));
  out.hi = std::pow(1.0 + inv_m, static_cast<double>(out.word_length));
  out.modulus = std::abs(evaluate(g, a, t));
  return out;
}

/// Neighbourhood W of 0 with N W contained in the box, so that every alpha in
/// T_m satisfies |alpha(s) - 1| < eps on W. Z steps cannot be subdivided, so
/// W keeps only the zero step once N > 1; K stays whole (T_m is trivial on K).
inline GeneratingBox equicontinuity_window(const TmSpec& spec, double eps) {
  require_valid_m(spec.m);
  if (!(eps > 0.0)) throw Error(Errc::InvalidEpsilon, "eps must be positive");
  if (eps >= 1.0 / spec.m) return spec.box;
  const int N = compute_N(spec.m, eps).N;
  GeneratingBox w = spec.box;
  for (auto& u : w.real_halfwidths) u /= N;
  if (N > 1) w.int_reach = 0;
  return w;
}

/// Draws from T_m by rejection: z from the rectangle |Re z| <= log(1+1/m)/u,
/// |Im z| <= 2 asin(1/2m)/u, w from the disc |w - 1| < 1/m. Both regions contain
/// the T_m parameters. Dual residues are 0: a nontrivial finite subgroup of
/// the circle is never inside |z - 1| < 1/2.
template <class Rng>
GenChar sample_tm_character(const GroupSpec& g, const TmSpec& spec, Rng& rng, int max_tries = 100000) {
  validate(g, spec);
  const double inv_m = 1.0 / spec.m;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit01(0.0, 1.0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    GenChar a = trivial_character(g);
    for (int j = 0; j < g.real_rank(); ++j) {
      const double u = spec.box.real_halfwidths[j];
      const double re_half = std::log1p(inv_m) / u;
      const double im_half = 2.0 * std::asin(inv_m / 2.0) / u;
      a.z[j] = cplx(re_half * unit(rng), im_half * unit(rng));
    }
    for (int j = 0; j < g.int_rank(); ++j) {
      const double rho = inv_m * std::sqrt(unit01(rng));
      a.w[j] = 1.0 + std::polar(rho, angle(rng));
    }
    if (tm_membership(g, a, spec)) return a;
  }
  throw Error(Errc::InvalidArgument, "T_m rejection sampler exhausted its attempts");
}

// ---------------------------------------------------------------------------
// H(R) ~ C via psi(t) = exp(z t), and the windows
//   W_{n,eps} = { z : |e^{zx} - 1| < eps for x in [-n, n] }.

struct WindowBox {
  double re_halfwidth = 0.0;
  double im_halfwidth = 0.0;
};

inline bool in_window_box(cplx z, const WindowBox& box) {
  return std::abs(z.real()) < box.re_halfwidth && std::abs(z.imag()) < box.im_halfwidth;
}

inline void require_window_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidEpsilon, "eps must lie in (0, 1)");
}

/// Membership in W_{n,eps}, sampling x on `samples` uniform points of [-n, n].
inline bool hr_window_member(cplx z, int n, double eps, int samples) {
  require_window_eps(eps);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (samples < 3) throw Error(Errc::InvalidArgument, "samples must be >= 3");
  for (int i = 0; i < samples; ++i) {
    const double x = -n + 2.0 * n * i / (samples - 1);
    if (!(std::abs(std::exp(z * x) - 1.0) < eps)) return false;
  }
  return true;
}

/// Printed imaginary-part bound of the outer region at |Re z| = re_abs:
/// arccos(u)/n with u = (e^{-2|a|n} + 1 - eps^2) / (2 e^{|a|n}).
inline double hr_outer_im_bound(double re_abs, int n, double eps) {
  require_window_eps(eps);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const double a = std::abs(re_abs) * n;
  const double u = (std::exp(-2.0 * a) + 1.0 - eps * eps) / (2.0 * std::exp(a));
  return std::acos(std::clamp(u, -1.0, 1.0)) / n;
}

/// Imaginary-part bound obtained from |e^{zx} - 1| < eps at x = +-n alone.
/// Never looser than the printed bound; used to cross-check it.
inline double hr_endpoint_im_bound(double re_abs, int n, double eps) {
  require_window_eps(eps);
  const double a = std::abs(re_abs) * n;
  const double u = (std::exp(a) + std::exp(-a) * (1.0 - eps * eps)) / 2.0;
  if (u >= 1.0) return 0.0;
  return std::acos(u) / n;
}

struct HrWindowBoxes {
  /// Re half-width (1/n) log(1+eps). The Im half-width is the printed bound
  /// evaluated at that Re half-width, where it is largest.
  WindowBox outer;
  /// (log(1 + delta/2)/n, delta/2).
  WindowBox inner;
};

inline HrWindowBoxes hr_window_boxes(int n, double eps, double delta) {
  require_window_eps(eps);
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::InvalidDelta, "delta must lie in (0, 1)");
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  HrWindowBoxes out;
  out.outer.re_halfwidth = std::log1p(eps) / n;
  out.outer.im_halfwidth = hr_outer_im_bound(out.outer.re_halfwidth, n, eps);
  out.inner.re_halfwidth = std::log1p(delta / 2.0) / n;
  out.inner.im_halfwidth = delta / 2.0;
  return out;
}

}  // namespace lcachar
