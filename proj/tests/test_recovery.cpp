#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lcachar/recovery.hpp"
#include "oracles.hpp"

using namespace lcachar;
using Catch::Approx;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lcachar::Error");
  return Errc::Parse;
}

CcFunction z_function(std::int64_t offset, std::vector<cplx> values) {
  const auto n = values.size();
  return CcFunction(make_group(0, 1), {}, {}, {offset}, {n}, std::move(values));
}

std::vector<GroupElement> z_range(std::int64_t lo, std::int64_t hi) {
  const auto z = make_group(0, 1);
  std::vector<GroupElement> out;
  for (auto k = lo; k <= hi; ++k) out.push_back(make_element(z, {}, {k}));
  return out;
}

}  // namespace

TEST_CASE("recover_character by hand on Z") {
  const auto z = make_group(0, 1);
  const auto phi = gelfand_functional(z, make_character(z, {}, {2.0}));
  const auto f = z_function(0, {1.0, 1.0});
  CHECK(phi(f) == cplx(3.0));
  CHECK(phi(translate(f, make_element(z, {}, {1}))) == cplx(6.0));
  const auto rc = recover_character(phi, f, z_range(-3, 3));
  CHECK(rc.value_at(make_element(z, {}, {1})) == cplx(2.0));
  CHECK(rc.value_at(make_element(z, {}, {-2})).value() == cplx(0.25));
  CHECK(rc.residual <= 1e-12);
}

TEST_CASE("trivial hidden character recovers to ones") {
  const auto g = make_group(0, 1, {3});
  const auto phi = gelfand_functional(g, trivial_character(g));
  const auto f = sample_function(g, {}, {}, {-1}, {3}, [](const GroupElement& t) { return cplx(1.0 + t.ints[0] * t.ints[0]); });
  const auto rc = recover_character(phi, f, grid_samples(g, {}, 0.0, 3));
  for (const auto& v : rc.values) CHECK(std::abs(v - 1.0) <= 1e-15);
  CHECK(rc.residual == 0.0);
}

TEST_CASE("recovery on the R grid is exact up to rounding") {
  const auto r = make_group(1, 0);
  const cplx hidden(0.3, 1.2);
  const auto phi = gelfand_functional(r, make_character(r, {hidden}));
  const auto tent = tent_1d(0.01, 1.0);
  const auto samples = grid_samples(r, {0.01}, 2.0, 0);
  REQUIRE(samples.size() == 401);
  const auto rc = recover_character(phi, tent, samples);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    worst = std::max(worst, std::abs(rc.values[i] - std::exp(hidden * samples[i].real[0])));
  }
  CHECK(worst <= 1e-8);
  CHECK(rc.residual <= 1e-9);

  const auto fit = fit_parametric(rc);
  CHECK(std::abs(fit.z[0] - hidden) <= 1e-6);
  CHECK(fit_error(rc, fit) <= 1e-6);
}

TEST_CASE("independence of the probe") {
  const auto z = make_group(0, 1);
  const auto phi = gelfand_functional(z, make_character(z, {}, {cplx(0.8, 0.9)}));
  const auto f = z_function(0, {1.0, 1.0});
  CHECK(independence_check(phi, f, f, z_range(-4, 4)) == 0.0);
  CHECK(independence_check(phi, f, delta(z, identity(z)), z_range(-4, 4)) <= 1e-12);

  const auto r = make_group(1, 0);
  const auto psi = gelfand_functional(r, make_character(r, {cplx(-0.4, 2.5)}));
  const auto samples = grid_samples(r, {0.01}, 1.0, 0);
  CHECK(independence_check(psi, tent_1d(0.01, 1.0), tent_1d(0.01, 0.3, 0.5), samples) <= 1e-9);
}

TEST_CASE("recovery refuses vanishing denominators") {
  const auto z = make_group(0, 1);
  // phi(delta_0 - delta_1 / 2) = 1 - w/2 = 0 for w = 2.
  const auto phi = gelfand_functional(z, make_character(z, {}, {2.0}));
  const auto f = z_function(0, {1.0, -0.5});
  CHECK(code_of([&] { recover_character(phi, f, z_range(0, 2)); }) == Errc::ZeroDenominator);
  CHECK(code_of([&] { independence_check(phi, f, delta(z, identity(z)), z_range(0, 2)); }) == Errc::ZeroDenominator);

  const auto r = make_group(1, 0);
  const auto psi = gelfand_functional(r, trivial_character(r));
  CHECK(code_of([&] { recover_character(psi, tent_1d(0.1, 1.0), {make_element(r, {0.05})}); }) ==
        Errc::GridMisaligned);
}

TEST_CASE("discrete recovery") {
  const auto z = make_group(0, 1);
  const auto phi = gelfand_functional(z, make_character(z, {}, {3.0}));
  const auto rc = discrete_recover(phi, z_range(0, 2));
  CHECK(rc.values == std::vector<cplx>{1.0, 3.0, 9.0});

  const auto z2 = make_group(0, 0, {2});
  const auto psi = gelfand_functional(z2, make_character(z2, {}, {}, {1}));
  const auto rc2 = discrete_recover(psi, torsion_elements(z2));
  CHECK(std::abs(rc2.values[0] - 1.0) <= 1e-15);
  CHECK(std::abs(rc2.values[1] + 1.0) <= 1e-15);

  const auto g = make_group(0, 2, {4});
  const auto hidden = make_character(g, {}, {cplx(1.2, -0.3), cplx(0.5, 0.5)}, {3});
  const auto chi = gelfand_functional(g, hidden);
  const auto samples = grid_samples(g, {}, 0.0, 2);
  const auto direct = discrete_recover(chi, samples);
  const auto via_delta = recover_character(chi, delta(g, identity(g)), samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(std::abs(direct.values[i] - via_delta.values[i]) <= 1e-12 * std::abs(direct.values[i]));
  }
  CHECK(code_of([] {
          const auto r = make_group(1, 0);
          discrete_recover(gelfand_functional(r, trivial_character(r)), {identity(r)});
        }) == Errc::DiracOnContinuousFactor);
}

TEST_CASE("fit_parametric read-offs") {
  const auto z = make_group(0, 1);
  const auto rc = discrete_recover(gelfand_functional(z, make_character(z, {}, {2.0})), z_range(-1, 1));
  CHECK(fit_parametric(rc).w[0] == cplx(2.0));

  const auto z4 = make_group(0, 0, {4});
  const auto rc4 = discrete_recover(gelfand_functional(z4, make_character(z4, {}, {}, {1})), torsion_elements(z4));
  CHECK(fit_parametric(rc4).dual_residues[0] == 1);
  CHECK(std::abs(rc4.values[1] - cplx(0, 1)) <= 1e-15);

  CHECK(code_of([&] { fit_parametric(discrete_recover(gelfand_functional(z, trivial_character(z)), z_range(2, 3))); }) ==
        Errc::MissingSamples);

  // e^{z h} = -1 when Im z * h = pi.
  const auto r = make_group(1, 0);
  const auto phi = gelfand_functional(r, make_character(r, {cplx(0.0, std::numbers::pi / 0.5)}));
  const auto spike = CcFunction(r, {0.5}, {0}, {}, {1}, {1.0});
  const auto rcr = recover_character(phi, spike, grid_samples(r, {0.5}, 1.0, 0));
  CHECK(code_of([&] { fit_parametric(rcr); }) == Errc::BranchAmbiguity);
}

TEST_CASE("round trip through recovery and fitting on a mixed group") {
  const auto g = make_group(1, 1, {4});
  const double h = 0.01;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> re(-1.0, 1.0);
  std::uniform_real_distribution<double> im(-2.0, 2.0);
  std::uniform_real_distribution<double> log_mod(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> arg(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<std::int64_t> res(0, 3);
  const auto probe = sample_function(g, {h}, {-100}, {-1}, {201, 3}, [](const GroupElement& t) {
    return cplx((1.0 - std::abs(t.real[0])) * (t.ints[0] == 0 ? 2.0 : 1.0) * (t.residues[0] == 0 ? 1.0 : 0.0));
  });
  const auto samples = grid_samples(g, {h}, 0.1, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto hidden = make_character(g, {cplx(re(rng), im(rng))}, {std::polar(std::exp(log_mod(rng)), arg(rng))}, {res(rng)});
    const auto phi = gelfand_functional(g, hidden);
    if (std::abs(phi(probe)) <= 1e-6) continue;
    const auto rc = recover_character(phi, probe, samples);
    CHECK(rc.residual <= 1e-9);
    const auto fit = fit_parametric(rc);
    CHECK(fit.dual_residues == hidden.dual_residues);
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(evaluate(g, fit, s) - evaluate(g, hidden, s)));
    CHECK(worst <= 1e-6);
    for (const auto& v : rc.values) CHECK(std::abs(v) > 1e-9);
  }
}

TEST_CASE("Gel'fand balls") {
  const auto z = make_group(0, 1);
  const auto alpha = make_character(z, {}, {1.0});
  const auto beta = make_character(z, {}, {1.1});
  const std::vector<CcFunction> probes{delta(z, make_element(z, {}, {1}))};
  CHECK(gelfand_ball_member(alpha, alpha, 1e-12, probes));
  CHECK_FALSE(gelfand_ball_member(beta, alpha, 0.05, probes));
  CHECK(gelfand_ball_member(beta, alpha, 0.2, probes));
  CHECK(code_of([&] { gelfand_ball_member(beta, alpha, 0.2, {}); }) == Errc::EmptyProbeSet);
}

TEST_CASE("multiplicativity probe rejects non-multiplicative oracles") {
  const auto z = make_group(0, 1);
  std::mt19937_64 rng(2);
  std::vector<std::pair<CcFunction, CcFunction>> probes;
  for (int i = 0; i < 8; ++i) probes.emplace_back(oracle::random_z_function(rng, 6), oracle::random_z_function(rng, 6));

  const auto phi = gelfand_functional(z, make_character(z, {}, {cplx(0.7, 0.4)}));
  CHECK(multiplicativity_defect(phi, probes) <= 1e-12);
  CHECK_NOTHROW(require_multiplicative(phi, probes, 1e-9));

  // Linear but not multiplicative: twice a character transform.
  const MultiplicativeFunctional twice(z, [&](const CcFunction& f) { return 2.0 * phi(f); });
  CHECK(code_of([&] { require_multiplicative(twice, probes, 1e-9); }) == Errc::NotMultiplicative);

  // Slightly noisy phi_alpha passes at a loose tolerance only.
  const MultiplicativeFunctional noisy(z, [&](const CcFunction& f) { return phi(f) * (1.0 + 1e-7); });
  CHECK_NOTHROW(require_multiplicative(noisy, probes, 1e-5));
  CHECK(code_of([&] { require_multiplicative(noisy, probes, 1e-12); }) == Errc::NotMultiplicative);
  CHECK(code_of([&] { require_multiplicative(phi, {}, 1e-9); }) == Errc::EmptyProbeSet);
}
