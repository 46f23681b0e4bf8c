#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "lcachar/characters.hpp"

using namespace lcachar;
using Catch::Approx;

namespace {

bool has_code(Errc code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("evaluate on the worked examples") {
  const auto g = make_group(1, 1, {3});
  const auto t = make_element(g, {0.7}, {-4}, {2});
  CHECK(evaluate(g, trivial_character(g), t) == cplx(1.0));

  const auto z = make_group(0, 1);
  CHECK(evaluate(z, make_character(z, {}, {2.0}), make_element(z, {}, {3})) == cplx(8.0));
  CHECK(evaluate(z, make_character(z, {}, {2.0}), make_element(z, {}, {-2})) == cplx(0.25));

  const auto r = make_group(1, 0);
  const auto v = evaluate(r, make_character(r, {1.0}), make_element(r, {std::log(2.0)}));
  CHECK(v.real() == Approx(2.0).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("combine and invert act on parameters") {
  const auto z = make_group(0, 1);
  CHECK(combine(z, make_character(z, {}, {2.0}), make_character(z, {}, {3.0})).w[0] == cplx(6.0));

  const auto z4 = make_group(0, 0, {4});
  CHECK(combine(z4, make_character(z4, {}, {}, {1}), make_character(z4, {}, {}, {3})).dual_residues[0] == 0);

  const auto g = make_group(1, 1, {5});
  const auto a = make_character(g, {cplx(0.3, -1.1)}, {cplx(0.5, 2.0)}, {2});
  const auto id = combine(g, a, invert(g, a));
  CHECK(std::abs(id.z[0]) == 0.0);
  CHECK(std::abs(id.w[0] - 1.0) < 1e-15);
  CHECK(id.dual_residues[0] == 0);

  CHECK(has_code(Errc::SpecMismatch, [&] { combine(g, a, trivial_character(z)); }));
  CHECK(has_code(Errc::InvalidArgument, [&] { make_character(z, {}, {0.0}); }));
}

TEST_CASE("unitarity") {
  const auto r = make_group(1, 0);
  CHECK_FALSE(is_unitary(make_character(r, {0.3})));
  CHECK(is_unitary(make_character(r, {cplx(0.0, 5.0)})));
  const auto z = make_group(0, 1);
  CHECK(is_unitary(make_character(z, {}, {cplx(0.0, 1.0)})));
  CHECK_FALSE(is_unitary(make_character(z, {}, {1.01})));
  CHECK(is_unitary(make_character(z, {}, {1.01}), 0.02));
  for (const auto& a : enumerate_characters({6, 4})) CHECK(is_unitary(a));
}

TEST_CASE("enumerate_characters lists the dual of K") {
  const auto z2 = make_group(0, 0, {2});
  const auto chars2 = enumerate_characters({2});
  REQUIRE(chars2.size() == 2);
  const auto gen2 = make_element(z2, {}, {}, {1});
  CHECK(std::abs(evaluate(z2, chars2[0], gen2) - 1.0) < 1e-15);
  CHECK(std::abs(evaluate(z2, chars2[1], gen2) + 1.0) < 1e-15);

  const auto z4 = make_group(0, 0, {4});
  const auto chars4 = enumerate_characters({4});
  REQUIRE(chars4.size() == 4);
  const cplx expected[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(std::abs(evaluate(z4, chars4[c], make_element(z4, {}, {}, {1})) - expected[c]) < 1e-15);
  }

  const auto klein = make_group(0, 0, {2, 2});
  const auto chars = enumerate_characters({2, 2});
  REQUIRE(chars.size() == 4);
  for (const auto& a : chars) {
    for (const auto& s : torsion_elements(klein)) {
      const auto v = evaluate(klein, a, s);
      CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-15);
      CHECK(std::abs(v.imag()) < 1e-15);
    }
  }
  CHECK(has_code(Errc::InvalidOrder, [] { enumerate_characters({1}); }));
}

TEST_CASE("homomorphism and combine compatibility on random data") {
  const auto g = make_group(2, 1, {3, 4});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::int64_t> k(-6, 6);
  auto random_char = [&] {
    return make_character(g, {cplx(u(rng), 3 * u(rng)), cplx(u(rng), 3 * u(rng))},
                          {std::polar(0.6 + 0.5 * (u(rng) + 1), 3 * u(rng))}, {k(rng), k(rng)});
  };
  auto random_element = [&] { return make_element(g, {2 * u(rng), 2 * u(rng)}, {k(rng)}, {k(rng), k(rng)}); };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_char();
    const auto b = random_char();
    const auto s = random_element();
    const auto t = random_element();
    const auto whole = evaluate(g, a, add(g, s, t));
    CHECK(std::abs(whole - evaluate(g, a, s) * evaluate(g, a, t)) <= 1e-12 * (1 + std::abs(whole)));
    const auto ab = evaluate(g, combine(g, a, b), s);
    CHECK(std::abs(ab - evaluate(g, a, s) * evaluate(g, b, s)) <= 1e-12 * (1 + std::abs(ab)));
    CHECK(evaluate(g, a, s) != 0.0);
  }
}

TEST_CASE("torsion elements are killed by their order") {
  const auto g = make_group(0, 0, {6, 4});
  for (const auto& a : enumerate_characters({6, 4})) {
    for (const auto& s : torsion_elements(g)) {
      const auto q = element_order(g, s);
      CHECK(std::abs(ipow(evaluate(g, a, s), q) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("T_m membership examples") {
  const auto z = make_group(0, 1);
  const TmSpec spec{2, unit_box(z), 1024};
  CHECK(tm_membership(z, trivial_character(z), spec));
  CHECK(tm_membership(z, make_character(z, {}, {1.1}), spec));
  CHECK_FALSE(tm_membership(z, make_character(z, {}, {2.0}), spec));
  // 1/w must also be close to 1: |1/0.6 - 1| = 2/3.
  CHECK_FALSE(tm_membership(z, make_character(z, {}, {0.6}), spec));

  const auto r = make_group(1, 0);
  const TmSpec rspec{3, make_box(r, {1.0}), 1024};
  CHECK(tm_membership(r, make_character(r, {cplx(0.1, 0.1)}), rspec));
  CHECK_FALSE(tm_membership(r, make_character(r, {cplx(0.0, 0.5)}), rspec));

  // Nontrivial characters of K never lie in T_m.
  const auto k = make_group(0, 0, {50});
  CHECK_FALSE(tm_membership(k, make_character(k, {}, {}, {1}), TmSpec{2, unit_box(k), 2}));
}

TEST_CASE("growth bounds examples") {
  const auto z = make_group(0, 1);
  const TmSpec spec{2, unit_box(z), 1024};
  const auto a = make_character(z, {}, {1.1});

  const auto at0 = growth_bounds(z, a, identity(z), spec);
  CHECK(at0.lo == 1.0);
  CHECK(at0.hi == 1.0);
  CHECK(at0.modulus == 1.0);

  const auto at5 = growth_bounds(z, a, make_element(z, {}, {5}), spec);
  CHECK(at5.lo == 0.03125);
  CHECK(at5.hi == 7.59375);
  CHECK(at5.modulus == Approx(1.61051).epsilon(1e-14));

  // Frozen: e^{0.05 * 2.5} = 1.1331484530668263.
  const auto r = make_group(1, 0);
  const TmSpec rspec{2, make_box(r, {1.0}), 1024};
  const auto b = growth_bounds(r, make_character(r, {0.05}), make_element(r, {2.5}), rspec);
  CHECK(b.word_length == 3);
  CHECK(b.lo == 0.125);
  CHECK(b.hi == 3.375);
  CHECK(b.modulus == Approx(1.1331484530668263).epsilon(1e-14));

  CHECK(has_code(Errc::NotInTm, [&] { growth_bounds(z, make_character(z, {}, {2.0}), identity(z), spec); }));
}

TEST_CASE("growth sandwich on random T_m characters of R x Z") {
  const auto g = make_group(1, 1);
  const TmSpec spec{2, make_box(g, {1.0}), 256};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> x(-20.0, 20.0);
  std::uniform_int_distribution<std::int64_t> k(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = sample_tm_character(g, spec, rng);
    for (int i = 0; i < 20; ++i) {
      const auto t = make_element(g, {x(rng)}, {k(rng)});
      const auto b = growth_bounds(g, a, t, spec);
      CHECK(b.lo <= b.modulus);
      CHECK(b.modulus <= b.hi);
    }
  }
}

TEST_CASE("equicontinuity window shape") {
  const auto r = make_group(1, 0);
  const TmSpec spec{2, make_box(r, {1.0}), 1024};
  CHECK(equicontinuity_window(spec, 0.5) == spec.box);
  CHECK(equicontinuity_window(spec, 0.9) == spec.box);
  CHECK(equicontinuity_window(spec, 0.4).real_halfwidths[0] == Approx(1.0 / 3.0));
  CHECK(equicontinuity_window(spec, 0.1).real_halfwidths[0] == Approx(1.0 / 11.0));

  const auto g = make_group(1, 1, {3});
  const TmSpec gspec{2, make_box(g, {2.0}), 64};
  const auto w = equicontinuity_window(gspec, 0.1);
  CHECK(w.int_reach == 0);
  CHECK(w.real_halfwidths[0] == Approx(2.0 / 11.0));
  CHECK(has_code(Errc::InvalidEpsilon, [&] { equicontinuity_window(spec, 0.0); }));
}

TEST_CASE("equicontinuity window bounds T_m characters on a mixed group") {
  const auto g = make_group(1, 1, {3});
  const TmSpec spec{3, make_box(g, {1.0}), 128};
  std::mt19937_64 rng(23);
  for (double eps : {0.05, 0.2}) {
    const auto w = equicontinuity_window(spec, eps);
    std::uniform_real_distribution<double> s(-w.real_halfwidths[0], w.real_halfwidths[0]);
    std::uniform_int_distribution<std::int64_t> r(0, 2);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = sample_tm_character(g, spec, rng);
      for (int i = 0; i < 40; ++i) {
        const auto t = make_element(g, {s(rng)}, {0}, {r(rng)});
        CHECK(std::abs(evaluate(g, a, t) - 1.0) < eps);
      }
    }
  }
}

TEST_CASE("H(R) window membership examples") {
  CHECK(hr_window_member(0.0, 1, 0.5, 101));
  CHECK_FALSE(hr_window_member(1.0, 1, 0.5, 101));
  CHECK(hr_window_member(cplx(0.0, 0.1), 1, 0.5, 101));
  // max |e^{0.1 i x} - 1| on [-1, 1] is 2 sin 0.05 = 0.099958338541356663.
  CHECK(hr_window_member(cplx(0.0, 0.1), 1, 0.09996, 2001));
  CHECK_FALSE(hr_window_member(cplx(0.0, 0.1), 1, 0.09995, 2001));
  CHECK(has_code(Errc::InvalidEpsilon, [] { hr_window_member(0.0, 1, 1.0, 11); }));
  CHECK(has_code(Errc::InvalidArgument, [] { hr_window_member(0.0, 1, 0.5, 2); }));
}

TEST_CASE("H(R) window boxes") {
  const auto b = hr_window_boxes(1, 0.5, 0.5);
  CHECK(b.outer.re_halfwidth == Approx(0.40546510810816438).epsilon(1e-15));
  CHECK(b.inner.re_halfwidth == Approx(0.22314355131420976).epsilon(1e-15));
  CHECK(b.inner.im_halfwidth == 0.25);
  const auto b2 = hr_window_boxes(2, 0.5, 0.5);
  CHECK(b2.inner.re_halfwidth == Approx(0.22314355131420976 / 2).epsilon(1e-15));
  CHECK(b2.inner.im_halfwidth == 0.25);
  CHECK(has_code(Errc::InvalidDelta, [] { hr_window_boxes(1, 0.5, 0.0); }));
  CHECK(has_code(Errc::InvalidEpsilon, [] { hr_window_boxes(1, 1.5, 0.5); }));
}

TEST_CASE("printed outer bounds contain sampled window members") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2, 3}) {
    const double eps = 0.5;
    int accepted = 0;
    while (accepted < 200) {
      const cplx z(u(rng) / n, 2.0 * u(rng) / n);
      if (!hr_window_member(z, n, eps, 2001)) continue;
      ++accepted;
      CHECK(std::abs(z.real()) < std::log1p(eps) / n);
      CHECK(std::abs(z.imag()) < hr_endpoint_im_bound(z.real(), n, eps) + 1e-9);
      CHECK(hr_endpoint_im_bound(z.real(), n, eps) <= hr_outer_im_bound(z.real(), n, eps));
    }
  }
}

TEST_CASE("inner box sits in W_{1,eps} but leaks out of W_{2,eps} when delta = eps") {
  const auto b1 = hr_window_boxes(1, 0.5, 0.5);
  CHECK(hr_window_member(cplx(0.999 * b1.inner.re_halfwidth, 0.999 * b1.inner.im_halfwidth), 1, 0.5, 2001));
  // Corner of the n = 2 inner box: |1.25^{1} e^{0.5 i} - 1| ~ 0.607 at x = 2.
  const auto b2 = hr_window_boxes(2, 0.5, 0.5);
  CHECK_FALSE(hr_window_member(cplx(0.999 * b2.inner.re_halfwidth, 0.999 * b2.inner.im_halfwidth), 2, 0.5, 2001));
}
