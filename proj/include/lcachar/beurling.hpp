#pragma once

// Exponential Beurling weights omega_r(s) = exp(r sum_j |s_j|) on the real
// factors (weight 1 on discrete factors) and the strip |Re z| <= r.
//
// For z in the strip |e^{z s}| <= omega_r(s), so |f^(z)| <= ||f||_omega; the
// helpers below evaluate both sides of that inequality on grid functions.

#include <cmath>
#include <complex>
#include <vector>

#include "lcachar/cc_function.hpp"
#include "lcachar/characters.hpp"
#include "lcachar/error.hpp"

namespace lcachar {

struct Weight {
  double r = 1.0;

  explicit Weight(double rate) : r(rate) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::InvalidArgument, "weight rate r must be positive");
  }

  double operator()(const GroupElement& s) const {
    double l1 = 0.0;
    for (double x : s.real) l1 += std::abs(x);
    return std::exp(r * l1);
  }
};

struct StripRegion {
  double r = 1.0;
};

inline bool in_strip(cplx z, const StripRegion& strip) { return std::abs(z.real()) <= strip.r; }

/// sum |f(s)| omega(s) * cell weight.
inline double weighted_norm(const CcFunction& f, const Weight& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.point_count(); ++i) {
    const cplx v = f.values()[i];
    if (v != 0.0) sum += std::abs(v) * w(f.point(i));
  }
  return sum * f.cell_weight();
}

/// Character with parameter z on every real factor, trivial elsewhere.
inline GenChar strip_character(const GroupSpec& group, cplx z) {
  if (group.real_rank() < 1) throw Error(Errc::SpecMismatch, "strip characters need a real factor");
  auto a = trivial_character(group);
  for (auto& zj : a.z) zj = z;
  return a;
}

/// True iff every real parameter lies in the strip and the character is
/// unitary on the discrete factors, i.e. |alpha(s)| <= omega_r(s) everywhere.
inline bool dominated_by_weight(const GenChar& a, double r) {
  for (const auto& z : a.z) {
    if (!in_strip(z, StripRegion{r})) return false;
  }
  for (const auto& w : a.w) {
    if (std::abs(std::abs(w) - 1.0) > 1e-12) return false;
  }
  return true;
}

struct StripCheck {
  double transform_abs = 0.0;
  double norm = 0.0;
  bool in_strip = false;
  /// |f^| <= ||f||_omega + 1e-12 when in the strip; vacuously true outside.
  bool ok = true;
};

inline StripCheck strip_bound_check(const CcFunction& f, const GenChar& a, double r) {
  require_conforms(f.group(), a);
  StripCheck out;
  out.transform_abs = std::abs(gelfand_transform(f, a));
  out.norm = weighted_norm(f, Weight(r));
  out.in_strip = dominated_by_weight(a, r);
  out.ok = !out.in_strip || out.transform_abs <= out.norm + 1e-12;
  return out;
}

inline StripCheck strip_bound_check(const CcFunction& f, cplx z, double r) {
  return strip_bound_check(f, strip_character(f.group(), z), r);
}

struct ApproxBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// |f^(z) - g^(z)| <= ||f - g||_omega for z in the strip.
inline ApproxBound approx_transform_bound(const CcFunction& f, const CcFunction& g, const GenChar& a, double r) {
  require_same_grid(f, g);
  require_conforms(f.group(), a);
  if (!dominated_by_weight(a, r)) throw Error(Errc::OutsideStrip, "character is not bounded by the weight");
  ApproxBound out;
  out.lhs = std::abs(gelfand_transform(f, a) - gelfand_transform(g, a));
  out.rhs = weighted_norm(linear_combination(1.0, f, -1.0, g), Weight(r));
  out.ok = out.lhs <= out.rhs + 1e-12;
  return out;
}

inline ApproxBound approx_transform_bound(const CcFunction& f, const CcFunction& g, cplx z, double r) {
  return approx_transform_bound(f, g, strip_character(f.group(), z), r);
}

/// For |Re z| > r: ratios |f_k^(z)| / ||f_k||_omega for unit tents translated
/// to k * spacing in the growth direction of Re z, k = 0..count-1. The ratios
/// grow without bound, so z gives no bounded functional on L^1(R, omega).
inline std::vector<double> divergence_witness(cplx z, double r, int count, double spacing = 2.0, double h = 1e-2) {
  if (count < 1) throw Error(Errc::InvalidArgument, "count must be >= 1");
  const Weight w(r);
  const double direction = z.real() >= 0.0 ? 1.0 : -1.0;
  const auto group = make_group(1, 0);
  const auto chi = strip_character(group, z);
  std::vector<double> ratios;
  for (int k = 0; k < count; ++k) {
    const auto bump = tent_1d(h, 0.5, direction * spacing * k);
    ratios.push_back(std::abs(gelfand_transform(bump, chi)) / weighted_norm(bump, w));
  }
  return ratios;
}

}  // namespace lcachar
