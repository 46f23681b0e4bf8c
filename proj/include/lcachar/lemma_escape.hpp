#pragma once

// Power-escape bound: for integer m > 1 and 0 < eps < 1/m there is an N such
// that every z in the closed annulus eps <= |z - 1| <= 1/m has some power
// z^k, 1 <= k <= N, with |z^k - 1| > 1/m.
//
// compute_N builds N constructively from a ray L_delta cutting the circle
// |z - 1| = eps at radii r0 < 1 < r1; brute_force_max_escape scans a polar
// grid of the annulus and is the acceptance authority for any certificate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lcachar/error.hpp"

namespace lcachar {

struct LemmaCertificate {
  int m = 2;
  double eps = 0.0;
  double delta = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  int N = 0;
};

inline void require_valid_m(int m) {
  if (m < 2) throw Error(Errc::InvalidM, "m must exceed 1 (got " + std::to_string(m) + ")");
}

/// Least k in [1, k_max] with |z^k - 1| > 1/m.
inline std::optional<int> escape_index(std::complex<double> z, int m, int k_max) {
  require_valid_m(m);
  if (k_max < 1) throw Error(Errc::InvalidArgument, "k_max must be >= 1");
  const double radius = 1.0 / m;
  std::complex<double> power = z;
  for (int k = 1; k <= k_max; ++k) {
    if (std::abs(power - 1.0) > radius) return k;
    power *= z;
  }
  return std::nullopt;
}

/// Throws unless every internal relation of the certificate holds numerically.
inline void check_certificate_invariants(const LemmaCertificate& c) {
  const double inv_m = 1.0 / c.m;
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidArgument, "certificate: " + what); };
  if (c.m < 2) fail("m < 2");
  if (!(c.eps > 0.0 && c.eps < inv_m)) fail("eps outside (0, 1/m)");
  if (!(c.delta > 0.0 && c.delta < std::numbers::pi / 2)) fail("delta outside (0, pi/2)");
  if (!(std::sin(c.delta) < c.eps)) fail("ray misses the eps-circle");
  if (!(c.r0 > 0.0 && c.r0 < 1.0 && 1.0 < c.r1)) fail("radii not ordered r0 < 1 < r1");
  if (!(std::pow(c.r0, c.n2) < 1.0 - inv_m)) fail("r0^n2 >= 1 - 1/m");
  if (!(std::pow(c.r1, c.n3) >= 1.0 + inv_m)) fail("r1^n3 < 1 + 1/m");
  if (!(std::sin(c.n1 * c.delta) > inv_m && c.n1 * c.delta <= std::numbers::pi / 2)) {
    fail("n1 * delta outside the escape window");
  }
  if (c.N != std::max({c.n1, c.n2, c.n3})) fail("N != max(n1, n2, n3)");
}

inline LemmaCertificate compute_N(int m, double eps) {
  require_valid_m(m);
  const double inv_m = 1.0 / m;
  if (!(eps > 0.0) || !(eps < inv_m)) {
    throw Error(Errc::EpsilonOutOfRange, "eps must be < 1/m and > 0");
  }
  LemmaCertificate c;
  c.m = m;
  c.eps = eps;
  c.delta = std::min(std::asin(eps) / 2.0, std::numbers::pi / 6.0);

  const double s = std::sin(c.delta);
  const double half_chord = std::sqrt(eps * eps - s * s);
  c.r0 = std::cos(c.delta) - half_chord;
  c.r1 = std::cos(c.delta) + half_chord;

  // delta <= pi/6 and arcsin(1/m) <= pi/6 keep a multiple of delta inside
  // (arcsin(1/m), pi/2], so this loop terminates.
  for (int n = 1; n * c.delta <= std::numbers::pi / 2; ++n) {
    if (std::sin(n * c.delta) > inv_m) {
      c.n1 = n;
      break;
    }
  }
  c.n2 = 1;
  while (!(std::pow(c.r0, c.n2) < 1.0 - inv_m)) ++c.n2;
  c.n3 = 1;
  while (!(std::pow(c.r1, c.n3) >= 1.0 + inv_m)) ++c.n3;
  c.N = std::max({c.n1, c.n2, c.n3});

  check_certificate_invariants(c);
  return c;
}

struct EscapeScan {
  int max_k = 0;
  std::complex<double> witness;
};

/// Grid z = 1 + rho e^{i theta}, rho on n_radii points of [eps, 1/m]
/// (endpoints included), theta on n_angles points of [0, 2 pi).
/// The witness is the first grid point (angle-major order) attaining max_k.
inline EscapeScan brute_force_max_escape(int m, double eps, int n_angles, int n_radii, int k_cap,
                                         unsigned threads = 1) {
  require_valid_m(m);
  if (n_angles < 2 || n_radii < 2) throw Error(Errc::InvalidArgument, "grid needs >= 2 angles and radii");
  if (k_cap < 1) throw Error(Errc::InvalidArgument, "k_cap must be >= 1");
  const double inv_m = 1.0 / m;
  if (!(eps > 0.0) || !(eps <= inv_m)) throw Error(Errc::EpsilonOutOfRange, "eps must lie in (0, 1/m]");

  auto point = [&](int a, int r) {
    const double theta = 2.0 * std::numbers::pi * a / n_angles;
    const double rho = eps + (inv_m - eps) * r / (n_radii - 1);
    return 1.0 + std::polar(rho, theta);
  };

  struct Band {
    EscapeScan best;
    int best_index = -1;
    std::optional<std::complex<double>> stuck;
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_angles)));
  std::vector<Band> bands(threads);

  auto scan = [&](unsigned band) {
    Band& out = bands[band];
    for (int a = static_cast<int>(band); a < n_angles; a += static_cast<int>(threads)) {
      for (int r = 0; r < n_radii; ++r) {
        const auto z = point(a, r);
        const auto k = escape_index(z, m, k_cap);
        if (!k) {
          if (!out.stuck) out.stuck = z;
          return;
        }
        const int index = a * n_radii + r;
        if (*k > out.best.max_k || (*k == out.best.max_k && index < out.best_index)) {
          out.best = EscapeScan{*k, z};
          out.best_index = index;
        }
      }
    }
  };

  if (threads == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned b = 0; b < threads; ++b) pool.emplace_back(scan, b);
  }

  Band total;
  total.best_index = std::numeric_limits<int>::max();
  for (const auto& b : bands) {
    if (b.stuck && !total.stuck) total.stuck = b.stuck;
    if (b.best_index < 0) continue;
    if (b.best.max_k > total.best.max_k ||
        (b.best.max_k == total.best.max_k && b.best_index < total.best_index)) {
      total.best = b.best;
      total.best_index = b.best_index;
    }
  }
  if (total.stuck) {
    throw Error(Errc::NoEscapeWithinCap,
                "z = " + std::to_string(total.stuck->real()) + " + " + std::to_string(total.stuck->imag()) +
                    "i does not escape within " + std::to_string(k_cap) + " powers");
  }
  return total.best;
}

struct CertificateReport {
  bool holds = false;
  int max_k = 0;
  std::complex<double> witness;
};

inline CertificateReport verify_certificate(const LemmaCertificate& cert, int n_angles = 360, int n_radii = 50,
                                            unsigned threads = 1) {
  const int cap = std::max(64 * cert.N + 64, 4096);
  const auto scan = brute_force_max_escape(cert.m, cert.eps, n_angles, n_radii, cap, threads);
  return CertificateReport{scan.max_k <= cert.N, scan.max_k, scan.witness};
}

struct CertifiedBound {
  LemmaCertificate certificate;
  int N = 0;           // recipe N, doubled until the grid oracle accepts it
  int doublings = 0;
  CertificateReport report;
};

/// compute_N followed by the grid oracle; N is doubled while the oracle
/// finds a point needing more powers.
inline CertifiedBound certified_N(int m, double eps, int n_angles = 360, int n_radii = 50, unsigned threads = 1) {
  CertifiedBound out;
  out.certificate = compute_N(m, eps);
  out.N = out.certificate.N;
  out.report = verify_certificate(out.certificate, n_angles, n_radii, threads);
  while (out.report.max_k > out.N) {
    out.N *= 2;
    ++out.doublings;
  }
  out.report.holds = out.report.max_k <= out.N;
  return out;
}

}  // namespace lcachar
