#pragma once

// Compactly supported functions on R^m x Z^n x K, modelled as dense tables on
// a uniform grid. Axis order is (real..., int..., torsion...), row-major with
// the last axis fastest. Real grid index i on axis j sits at coordinate
// (real_offset[j] + i) * real_step[j]; torsion axes always span all of Z_d.
//
// Integrals are left-point Riemann sums with cell weight prod h_j. The rule
// is translation invariant on the grid, so the convolution theorem and the
// translation identity hold exactly up to rounding.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lcachar/characters.hpp"
#include "lcachar/error.hpp"
#include "lcachar/group.hpp"

namespace lcachar {

class CcFunction {
 public:
  CcFunction() = default;

  CcFunction(GroupSpec group, std::vector<double> real_step, std::vector<std::int64_t> real_offset,
             std::vector<std::int64_t> int_offset, std::vector<std::size_t> extents, std::vector<cplx> values)
      : group_(std::move(group)),
        real_step_(std::move(real_step)),
        real_offset_(std::move(real_offset)),
        int_offset_(std::move(int_offset)),
        extents_(std::move(extents)),
        values_(std::move(values)) {
    const auto m = static_cast<std::size_t>(group_.real_rank());
    const auto n = static_cast<std::size_t>(group_.int_rank());
    if (real_step_.size() != m || real_offset_.size() != m || int_offset_.size() != n) {
      throw Error(Errc::SpecMismatch, "grid description does not match " + group_.describe());
    }
    for (double h : real_step_) {
      if (!(h > 0.0) || !std::isfinite(h)) throw Error(Errc::InvalidArgument, "real_step must be positive");
    }
    if (extents_.size() != m + n + group_.torsion_rank()) {
      throw Error(Errc::SpecMismatch, "one extent per axis expected");
    }
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      if (extents_[a] == 0) throw Error(Errc::InvalidArgument, "extents must be positive");
      if (a >= m + n && extents_[a] != static_cast<std::size_t>(group_.cyclic_orders()[a - m - n])) {
        throw Error(Errc::SpecMismatch, "torsion axes must span the whole cyclic factor");
      }
    }
    if (values_.size() != point_count()) throw Error(Errc::SpecMismatch, "value table size does not match extents");
  }

  /// Zero function on the given grid block; torsion extents are filled in.
  static CcFunction zeros(const GroupSpec& group, std::vector<double> real_step, std::vector<std::int64_t> real_offset,
                          std::vector<std::int64_t> int_offset, std::vector<std::size_t> extents) {
    for (auto d : group.cyclic_orders()) extents.push_back(static_cast<std::size_t>(d));
    const auto count = std::accumulate(extents.begin(), extents.end(), std::size_t{1}, std::multiplies<>());
    return CcFunction(group, std::move(real_step), std::move(real_offset), std::move(int_offset), std::move(extents),
                      std::vector<cplx>(count, 0.0));
  }

  const GroupSpec& group() const noexcept { return group_; }
  const std::vector<double>& real_step() const noexcept { return real_step_; }
  const std::vector<std::int64_t>& real_offset() const noexcept { return real_offset_; }
  const std::vector<std::int64_t>& int_offset() const noexcept { return int_offset_; }
  const std::vector<std::size_t>& extents() const noexcept { return extents_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::vector<cplx>& mutable_values() noexcept { return values_; }

  std::size_t axis_count() const noexcept { return extents_.size(); }
  std::size_t point_count() const noexcept {
    return std::accumulate(extents_.begin(), extents_.end(), std::size_t{1}, std::multiplies<>());
  }

  double cell_weight() const noexcept {
    double w = 1.0;
    for (double h : real_step_) w *= h;
    return w;
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(extents_.size());
    for (std::size_t a = extents_.size(); a-- > 0;) {
      idx[a] = flat % extents_[a];
      flat /= extents_[a];
    }
    return idx;
  }

  std::size_t flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < extents_.size(); ++a) flat = flat * extents_[a] + idx[a];
    return flat;
  }

  /// Grid coordinate along each non-torsion axis, in units of the step.
  std::int64_t grid_coordinate(std::size_t axis, std::size_t i) const {
    const auto m = real_offset_.size();
    if (axis < m) return real_offset_[axis] + static_cast<std::int64_t>(i);
    if (axis < m + int_offset_.size()) return int_offset_[axis - m] + static_cast<std::int64_t>(i);
    return static_cast<std::int64_t>(i);
  }

  GroupElement point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    const auto m = real_offset_.size();
    const auto n = int_offset_.size();
    GroupElement t;
    for (std::size_t j = 0; j < m; ++j) t.real.push_back(static_cast<double>(grid_coordinate(j, idx[j])) * real_step_[j]);
    for (std::size_t j = 0; j < n; ++j) t.ints.push_back(grid_coordinate(m + j, idx[m + j]));
    for (std::size_t i = m + n; i < idx.size(); ++i) t.residues.push_back(static_cast<std::int64_t>(idx[i]));
    return t;
  }

  /// Value at grid coordinates (real/int in grid units, residues as is);
  /// zero off the stored block.
  cplx value_at_grid(const std::vector<std::int64_t>& coords) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      const auto local = coords[a] - grid_coordinate(a, 0);
      if (local < 0 || local >= static_cast<std::int64_t>(extents_[a])) return 0.0;
      flat = flat * extents_[a] + static_cast<std::size_t>(local);
    }
    return values_[flat];
  }

 private:
  GroupSpec group_;
  std::vector<double> real_step_;
  std::vector<std::int64_t> real_offset_;
  std::vector<std::int64_t> int_offset_;
  std::vector<std::size_t> extents_;
  std::vector<cplx> values_;
};

/// Fills the block by evaluating fn at every grid point.
template <class Fn>
CcFunction sample_function(const GroupSpec& group, std::vector<double> real_step, std::vector<std::int64_t> real_offset,
                           std::vector<std::int64_t> int_offset, std::vector<std::size_t> extents, Fn&& fn) {
  auto f = CcFunction::zeros(group, std::move(real_step), std::move(real_offset), std::move(int_offset),
                             std::move(extents));
  auto& vals = f.mutable_values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = fn(f.point(i));
  return f;
}

inline std::int64_t first_grid_index_at_or_above(double x, double h) {
  return static_cast<std::int64_t>(std::ceil(x / h - 1e-9));
}

inline std::int64_t last_grid_index_at_or_below(double x, double h) {
  return static_cast<std::int64_t>(std::floor(x / h + 1e-9));
}

/// 1_{[lo, hi]} on R sampled with step h: a grid point carries 1 when its
/// left-point cell [x, x + h) lies inside [lo, hi].
inline CcFunction indicator_1d(double h, double lo, double hi) {
  if (!(hi >= lo)) throw Error(Errc::InvalidArgument, "empty interval");
  const auto first = first_grid_index_at_or_above(lo, h);
  const auto last = last_grid_index_at_or_below(hi, h) - 1;
  if (last < first) throw Error(Errc::InvalidArgument, "interval contains no grid cell");
  const auto count = static_cast<std::size_t>(last - first + 1);
  return CcFunction(make_group(1, 0), {h}, {first}, {}, {count}, std::vector<cplx>(count, 1.0));
}

/// max(0, 1 - |x - center| / halfwidth) on R sampled with step h.
inline CcFunction tent_1d(double h, double halfwidth, double center = 0.0) {
  if (!(halfwidth > 0.0)) throw Error(Errc::InvalidArgument, "tent half-width must be positive");
  const auto first = first_grid_index_at_or_above(center - halfwidth, h);
  const auto last = last_grid_index_at_or_below(center + halfwidth, h);
  return sample_function(make_group(1, 0), {h}, {first}, {}, {static_cast<std::size_t>(last - first + 1)},
                         [&](const GroupElement& t) {
                           return cplx(std::max(0.0, 1.0 - std::abs(t.real[0] - center) / halfwidth));
                         });
}

/// Point mass at t; only defined on discrete groups.
inline CcFunction delta(const GroupSpec& group, const GroupElement& t) {
  if (!group.is_discrete()) {
    throw Error(Errc::DiracOnContinuousFactor, "point masses are not compactly supported functions on R");
  }
  require_conforms(group, t);
  auto f = CcFunction::zeros(group, {}, {}, t.ints, std::vector<std::size_t>(group.int_rank(), 1));
  std::vector<std::size_t> idx(f.axis_count(), 0);
  for (std::size_t i = 0; i < t.residues.size(); ++i) idx[group.int_rank() + i] = static_cast<std::size_t>(t.residues[i]);
  f.mutable_values()[f.flat_index(idx)] = 1.0;
  return f;
}

inline bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

inline void require_same_grid(const CcFunction& f, const CcFunction& g) {
  if (!(f.group() == g.group())) throw Error(Errc::SpecMismatch, "functions live on different groups");
  for (std::size_t j = 0; j < f.real_step().size(); ++j) {
    if (!same_step(f.real_step()[j], g.real_step()[j])) throw Error(Errc::StepMismatch, "real steps differ");
  }
}

/// (f*g)(t) = sum_s f(s) g(t - s) * cell weight, by direct summation.
inline CcFunction convolve(const CcFunction& f, const CcFunction& g) {
  require_same_grid(f, g);
  const auto& group = f.group();
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  const auto axes = f.axis_count();

  std::vector<std::int64_t> real_offset(m), int_offset(n);
  std::vector<std::size_t> extents;
  for (std::size_t j = 0; j < m; ++j) real_offset[j] = f.real_offset()[j] + g.real_offset()[j];
  for (std::size_t j = 0; j < n; ++j) int_offset[j] = f.int_offset()[j] + g.int_offset()[j];
  for (std::size_t a = 0; a < m + n; ++a) extents.push_back(f.extents()[a] + g.extents()[a] - 1);
  auto out = CcFunction::zeros(group, f.real_step(), real_offset, int_offset, extents);

  std::vector<std::vector<std::size_t>> g_index(g.point_count());
  for (std::size_t j = 0; j < g_index.size(); ++j) g_index[j] = g.multi_index(j);

  const double weight = f.cell_weight();
  auto& dst = out.mutable_values();
  std::vector<std::size_t> idx(axes);
  for (std::size_t i = 0; i < f.point_count(); ++i) {
    const cplx fv = f.values()[i];
    if (fv == 0.0) continue;
    const auto fi = f.multi_index(i);
    for (std::size_t j = 0; j < g_index.size(); ++j) {
      const cplx gv = g.values()[j];
      if (gv == 0.0) continue;
      const auto& gj = g_index[j];
      for (std::size_t a = 0; a < axes; ++a) {
        idx[a] = fi[a] + gj[a];
        if (a >= m + n) idx[a] %= out.extents()[a];
      }
      dst[out.flat_index(idx)] += fv * gv * weight;
    }
  }
  return out;
}

/// Real shift t_j / h_j as a grid count; throws unless it is an integer.
inline std::int64_t grid_shift(double shift, double h) {
  const double k = shift / h;
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9 * std::max(1.0, std::abs(k))) {
    throw Error(Errc::GridMisaligned, "shift " + std::to_string(shift) + " is not a multiple of step " + std::to_string(h));
  }
  return static_cast<std::int64_t>(rounded);
}

/// (tau_t f)(s) = f(s - t).
inline CcFunction translate(const CcFunction& f, const GroupElement& t) {
  const auto& group = f.group();
  require_conforms(group, t);
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());

  auto real_offset = f.real_offset();
  auto int_offset = f.int_offset();
  for (std::size_t j = 0; j < m; ++j) real_offset[j] += grid_shift(t.real[j], f.real_step()[j]);
  for (std::size_t j = 0; j < n; ++j) int_offset[j] += t.ints[j];

  bool rotates = false;
  for (auto r : t.residues) rotates = rotates || r != 0;
  if (!rotates) {
    return CcFunction(group, f.real_step(), std::move(real_offset), std::move(int_offset), f.extents(), f.values());
  }
  std::vector<cplx> values(f.point_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto idx = f.multi_index(i);
    for (std::size_t k = 0; k < t.residues.size(); ++k) {
      const auto d = group.cyclic_orders()[k];
      idx[m + n + k] = static_cast<std::size_t>(reduce_mod(static_cast<std::int64_t>(idx[m + n + k]) + t.residues[k], d));
    }
    values[f.flat_index(idx)] = f.values()[i];
  }
  return CcFunction(group, f.real_step(), std::move(real_offset), std::move(int_offset), f.extents(), std::move(values));
}

/// alpha evaluated on every grid point of f's block, as per-axis factors.
inline std::vector<std::vector<cplx>> character_axis_tables(const CcFunction& f, const GenChar& a) {
  const auto& group = f.group();
  require_conforms(group, a);
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  std::vector<std::vector<cplx>> tables(f.axis_count());
  for (std::size_t ax = 0; ax < f.axis_count(); ++ax) {
    auto& t = tables[ax];
    t.resize(f.extents()[ax]);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto c = f.grid_coordinate(ax, i);
      if (ax < m) {
        t[i] = std::exp(a.z[ax] * (static_cast<double>(c) * f.real_step()[ax]));
      } else if (ax < m + n) {
        t[i] = ipow(a.w[ax - m], c);
      } else {
        const auto d = group.cyclic_orders()[ax - m - n];
        t[i] = root_of_unity(reduce_mod(a.dual_residues[ax - m - n] * c, d), d);
      }
    }
  }
  return tables;
}

/// f^(alpha) = sum_s f(s) alpha(s) * cell weight.
inline cplx gelfand_transform(const CcFunction& f, const GenChar& a) {
  const auto tables = character_axis_tables(f, a);
  const auto axes = f.axis_count();
  std::vector<std::size_t> idx(axes, 0);
  cplx sum = 0.0;
  for (std::size_t flat = 0; flat < f.point_count(); ++flat) {
    const cplx v = f.values()[flat];
    if (v != 0.0) {
      cplx chi = 1.0;
      for (std::size_t ax = 0; ax < axes; ++ax) chi *= tables[ax][idx[ax]];
      sum += v * chi;
    }
    for (std::size_t ax = axes; ax-- > 0;) {
      if (++idx[ax] < f.extents()[ax]) break;
      idx[ax] = 0;
    }
  }
  return sum * f.cell_weight();
}

inline double l1_norm(const CcFunction& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::abs(v);
  return sum * f.cell_weight();
}

/// a f + b g on the smallest block covering both supports.
inline CcFunction linear_combination(cplx a, const CcFunction& f, cplx b, const CcFunction& g) {
  require_same_grid(f, g);
  const auto& group = f.group();
  const auto m = static_cast<std::size_t>(group.real_rank());
  const auto n = static_cast<std::size_t>(group.int_rank());
  std::vector<std::int64_t> lo(m + n), hi(m + n);
  for (std::size_t ax = 0; ax < m + n; ++ax) {
    lo[ax] = std::min(f.grid_coordinate(ax, 0), g.grid_coordinate(ax, 0));
    hi[ax] = std::max(f.grid_coordinate(ax, f.extents()[ax] - 1), g.grid_coordinate(ax, g.extents()[ax] - 1));
  }
  std::vector<std::size_t> extents;
  for (std::size_t ax = 0; ax < m + n; ++ax) extents.push_back(static_cast<std::size_t>(hi[ax] - lo[ax] + 1));
  auto out = CcFunction::zeros(group, f.real_step(), std::vector<std::int64_t>(lo.begin(), lo.begin() + m),
                               std::vector<std::int64_t>(lo.begin() + m, lo.end()), extents);
  std::vector<std::int64_t> coords(out.axis_count());
  for (std::size_t i = 0; i < out.point_count(); ++i) {
    const auto idx = out.multi_index(i);
    for (std::size_t ax = 0; ax < coords.size(); ++ax) coords[ax] = out.grid_coordinate(ax, idx[ax]);
    out.mutable_values()[i] = a * f.value_at_grid(coords) + b * g.value_at_grid(coords);
  }
  return out;
}

/// max |f(s) - g(s)| over the union of both blocks.
inline double sup_distance(const CcFunction& f, const CcFunction& g) {
  const auto diff = linear_combination(1.0, f, -1.0, g);
  double sup = 0.0;
  for (const auto& v : diff.values()) sup = std::max(sup, std::abs(v));
  return sup;
}

}  // namespace lcachar
