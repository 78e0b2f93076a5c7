#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "varlex/rng.hpp"
#include "varlex/verify.hpp"
#include "varlex/weights.hpp"

using namespace varlex;

namespace {

DomainPtr line(std::size_t n) {
  return std::make_shared<const DiscreteDomain>(build_unit_grid(1, n));
}

template <class F>
std::vector<std::pair<std::size_t, double>> trend(const std::vector<std::size_t>& res, F&& f) {
  std::vector<std::pair<std::size_t, double>> t;
  for (const auto r : res) {
    t.emplace_back(r, f(r));
  }
  return t;
}

}  // namespace

TEST_CASE("constant weight has constant one") {
  const auto d = std::make_shared<const DiscreteDomain>(build_example_domain(6));
  const CubeIndex idx(d);
  const auto one = ScalarField::constant(d, 1.0);
  CHECK(muckenhoupt_constant(one, 2.0, idx).value == 1.0);
  CHECK(muckenhoupt_constant(one, 1.3, idx, {Mode::dyadic, 8}).value == 1.0);
  CHECK(a1_constant(one, idx).value == 1.0);
  CHECK(measure_exponent_constant(ScalarField::constant(d, 2.5), idx).value == 1.0);
  CHECK_THROWS(muckenhoupt_constant(one, 1.0, idx));
  CHECK_THROWS(muckenhoupt_constant(ScalarField::constant(d, 0.0), 2.0, idx));
}

TEST_CASE("A_s and A_1 constants match brute force") {
  Rng rng(31);
  for (int t = 0; t < 15; ++t) {
    std::vector<Atom> atoms;
    const std::size_t n = 3 + rng.index(25);
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back({{0.1 * static_cast<double>(rng.index(10)), rng.uniform()}, rng.uniform(0.05, 1.0)});
    }
    const auto d = std::make_shared<const DiscreteDomain>(2, std::move(atoms), 2.0);
    std::vector<double> w(n);
    for (auto& v : w) {
      v = std::exp(rng.uniform(-3.0, 3.0));
    }
    const ScalarField wf(d, w);
    const CubeIndex idx(d);
    const double s = rng.uniform(1.1, 4.0);
    CHECK(oracle::close(muckenhoupt_constant(wf, s, idx).value, oracle::muckenhoupt(*d, w, s), 1e-9));
    CHECK(oracle::close(a1_constant(wf, idx).value, oracle::a1(*d, w), 1e-12));
    CHECK(muckenhoupt_constant(wf, s, idx).value >= 1.0 - 1e-12);
    CHECK(muckenhoupt_constant(wf, s, idx, {Mode::dyadic, 6}).value <=
          muckenhoupt_constant(wf, s, idx).value);
  }
}

TEST_CASE("power weight on the unit interval") {
  const auto d = line(40);
  const auto w = build_power_weight(d, {0.0}, 0.5);
  const CubeIndex idx(d);
  const std::vector<double> wv(w.values().begin(), w.values().end());
  const auto got = muckenhoupt_constant(w, 2.0, idx);
  CHECK(std::isfinite(got.value));
  CHECK(oracle::close(got.value, oracle::muckenhoupt(*d, wv, 2.0L), 1e-9));
  CHECK(build_power_weight(d, {0.0}, 0.0).min() == 1.0);
  const auto two = std::make_shared<const DiscreteDomain>(
      DiscreteDomain(1, {{{0.25}, 0.5}, {{0.75}, 0.5}}, 1.0));
  const auto lin = build_power_weight(two, {0.0}, 1.0);
  CHECK(lin[0] == 0.25);
  CHECK(lin[1] == 0.75);
  CHECK_THROWS(build_power_weight(two, {0.25}, -0.5));
  CHECK_THROWS(build_power_weight(two, {0.0, 0.0}, 1.0));
}

TEST_CASE("power window") {
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, 8));
  const auto sys = build_exponent_system(ScalarField::constant(d, 2.0), 0.5);
  // q = 1/(1/2 - 1/4) = 4, p' = 2, n = 2: window (-1/2, 1).
  const auto w = power_weight_window(sys, {0.5, 0.5}, 0.25);
  CHECK(w.lower == doctest::Approx(-0.5));
  CHECK(w.upper == doctest::Approx(1.0));
  CHECK(w.admissible);
  CHECK(!power_weight_window(sys, {0.5, 0.5}, -0.6).admissible);
  CHECK(!power_weight_window(sys, {0.5, 0.5}, 1.0).admissible);
}

TEST_CASE("A_1 of a clipped power is stable and |x|^-2 is not") {
  const std::vector<std::size_t> res{64, 128, 256};
  const auto clipped = trend(res, [](std::size_t r) {
    const auto d = line(r);
    return a1_constant(ScalarField::realize(d, expr::ClippedPower{{{0.0}}, 0.5}), CubeIndex(d)).value;
  });
  CHECK(is_stable(clipped, 2.0));
  const auto bad = trend(res, [](std::size_t r) {
    const auto d = line(r);
    return a1_constant(build_power_weight(d, {0.0}, -2.0), CubeIndex(d)).value;
  });
  CHECK(bad[1].second >= 1.5 * bad[0].second);
  CHECK(bad[2].second >= 1.5 * bad[1].second);
}

TEST_CASE("reverse Hölder on the clipped family") {
  const std::vector<std::size_t> res{64, 128, 256};
  for (const double theta : {0.25, 0.5}) {
    const auto t = trend(res, [&](std::size_t r) {
      const auto d = line(r);
      const auto w = ScalarField::realize(d, expr::ClippedPower{{{0.0}}, theta});
      return a1_constant(pointwise_power(w, 1.25), CubeIndex(d)).value;
    });
    CHECK(is_stable(t, 2.0));
  }
}

TEST_CASE("example weight class membership") {
  const std::vector<std::size_t> res{8, 16, 32};
  auto run = [&](double a, double s) {
    return trend(res, [&](std::size_t r) {
      const auto d = std::make_shared<const DiscreteDomain>(build_example_domain(r));
      return muckenhoupt_constant(ScalarField::realize(d, expr::ExampleWeight{a}), s, CubeIndex(d)).value;
    });
  };
  // p = 2: a in (-1, 1).
  CHECK(is_stable(run(-0.5, 2.0), 2.0));
  CHECK(is_stable(run(0.5, 2.0), 2.0));
  CHECK(is_stable(run(0.5, 3.0), 2.0));
  const auto bad = run(-2.0, 2.0);
  CHECK(bad[1].second >= 1.5 * bad[0].second);
  CHECK(bad[2].second >= 1.5 * bad[1].second);
}

TEST_CASE("membership is inherited by larger s") {
  const std::vector<std::size_t> res{64, 128, 256};
  for (const double eta : {-0.5, 0.5}) {
    for (const double s : {1.6, 2.0, 3.0}) {
      const auto t = trend(res, [&](std::size_t r) {
        const auto d = line(r);
        return muckenhoupt_constant(build_power_weight(d, {0.0}, eta), s,
                                    CubeIndex(d)).value;
      });
      CHECK(is_stable(t, 2.0));
    }
  }
}

TEST_CASE("samko composite weight") {
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, 6));
  const auto p = ScalarField::constant(d, 2.0);
  const auto sys = build_exponent_system(p, 0.5, 2.0, 0.1);
  const auto one = ScalarField::constant(d, 1.0);
  const auto w11 = build_samko_weight(one, one, sys);
  CHECK(w11.min() == 1.0);
  CHECK(w11.max() == 1.0);
  const auto w1 = ScalarField::realize(d, expr::ClippedPower{{{0.2, 0.2}}, 0.5});
  const auto w2 = ScalarField::realize(d, expr::ClippedPower{{{0.8, 0.8}}, 0.5});
  const auto w = build_samko_weight(w1, w2, sys);
  // Constant p = 2, alpha = 1/2, eps = 1/10, beta = 2: 1/q^- = 1/2 - 0.2 = 0.3,
  // s^- = 1 + q^-/2 = 1 + 5/3.
  const double inv_q = 0.3;
  const double s_low = 1.0 + 0.5 / 0.3;
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK(w[i] == doctest::Approx(std::pow(w1[i], inv_q) * std::pow(w2[i], inv_q * (1.0 - s_low))).epsilon(1e-12));
    CHECK(std::pow(w[i], 1.0 / inv_q) ==
          doctest::Approx(w1[i] * std::pow(w2[i], 1.0 - s_low)).epsilon(1e-12));
  }
  CHECK_THROWS(build_samko_weight(w1, w2, build_exponent_system(p, 0.5)));
  const WeightSpec spec{expr::ClippedPower{{{0.2, 0.2}}, 0.5}, expr::ClippedPower{{{0.8, 0.8}}, 0.5}};
  CHECK(realize_weight(d, spec, &sys)[3] == w[3]);
  CHECK_THROWS(realize_weight(d, spec));
}

TEST_CASE("variable power weight") {
  const auto d = line(16);
  const auto w = ScalarField::realize(d, expr::ClippedPower{{{0.0}}, 0.25});
  const auto one = ScalarField::constant(d, 1.0);
  const auto same = variable_power_weight(w, one);
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK(same[i] == w[i]);
  }
  const auto a = ScalarField::realize(d, expr::LogPerturbed{1.0, 0.1, {0.0}});
  CHECK(variable_power_weight(one, a).max() == 1.0);
  CHECK_THROWS(variable_power_weight(ScalarField::constant(d, 0.5), one));
  CHECK_THROWS(variable_power_weight(w, ScalarField::constant(d, 0.9)));
  CHECK(std::isfinite(a1_constant(variable_power_weight(w, a), CubeIndex(d)).value));
}

TEST_CASE("measure exponent constant") {
  const auto tr = [](const FieldExpr& p) {
    return trend({16, 32, 64}, [&](std::size_t r) {
      const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, r));
      return measure_exponent_constant(ScalarField::realize(d, p), CubeIndex(d)).value;
    });
  };
  const auto smooth = tr(expr::LogPerturbed{2.0, 1.0, {0.5, 0.5}});
  CHECK(is_stable(smooth, 2.0));
  const auto step = tr(expr::Step{0, 0.5, 2.0, 3.0});
  CHECK(step[1].second >= 1.5 * step[0].second);
  CHECK(step[2].second >= 1.5 * step[1].second);
}
