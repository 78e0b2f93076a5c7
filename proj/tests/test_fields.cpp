#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "varlex/fields.hpp"

using namespace varlex;

namespace {

DomainPtr line(std::size_t n, double lo = -1.0, double hi = 1.0) {
  return std::make_shared<const DiscreteDomain>(build_lebesgue_grid(1, {lo}, {hi}, {n}));
}

DomainPtr square(std::size_t n) {
  return std::make_shared<const DiscreteDomain>(build_unit_grid(2, n));
}

double brute_log_holder(const ScalarField& t) {
  const auto& d = t.domain();
  long double best = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < d.ambient_dim(); ++k) {
        const long double u = static_cast<long double>(d.coords(i)[k]) - d.coords(j)[k];
        s += u * u;
      }
      const long double r = std::sqrt(s);
      if (r > 0 && r <= 0.5L) {
        best = std::max(best, std::fabs(static_cast<long double>(t[i]) - t[j]) * std::log(1.0L / r));
      }
    }
  }
  return static_cast<double>(best);
}

}  // namespace

TEST_CASE("descriptors evaluate pointwise") {
  const std::vector<double> x{0.25, 0.5};
  CHECK(evaluate(expr::Constant{3.0}, x) == 3.0);
  CHECK(evaluate(expr::Power{{0.25, 0.0}, 2.0}, x) == doctest::Approx(0.25));
  CHECK(evaluate(expr::ProductPower{{0.0, 0.0}, {1.0, 1.0}}, x) == doctest::Approx(0.125));
  CHECK(evaluate(expr::Linear{1.0, {2.0, 0.0}}, x) == 1.5);
  CHECK(evaluate(expr::Step{1, 0.5, 2.0, 3.0}, x) == 3.0);
  CHECK(evaluate(expr::LogPerturbed{2.0, 1.0, {0.25, 0.5}}, x) == 2.0);
  CHECK(evaluate(expr::LogPerturbed{2.0, 1.0, {0.25, 0.0}}, x) ==
        doctest::Approx(2.0 + 1.0 / std::log(std::exp(1.0) + 2.0)));
  CHECK(evaluate(expr::ClippedPower{{{0.25, 0.5}}, 0.5}, x, 0.01) == doctest::Approx(10.0));
  CHECK(evaluate(expr::ClippedPower{{{0.0, 0.0}}, 0.5}, std::vector<double>{2.0, 2.0}) == 1.0);
  CHECK_THROWS(evaluate(expr::Power{{0.25, 0.5}, -1.0}, x));
  CHECK_THROWS(evaluate(expr::Table{{1.0}}, x));
  CHECK(evaluate(expr::ExampleWeight{0.5}, std::vector<double>{0.25, 0.25}) == doctest::Approx(0.5));
  CHECK(evaluate(expr::ExampleWeight{1.0}, std::vector<double>{-0.5, -0.25}) ==
        doctest::Approx(0.125));
}

TEST_CASE("scalar field rejects bad values") {
  const auto d = line(4);
  CHECK_THROWS(ScalarField(d, {1.0, 2.0}));
  CHECK_THROWS(ScalarField(d, {1.0, 2.0, NAN, 1.0}));
  const auto f = ScalarField::realize(d, expr::Linear{0.0, {1.0}});
  CHECK(f.min() == -0.75);
  CHECK(f.max() == 0.75);
  CHECK(f.descriptor().has_value());
  CHECK(is_analytic(expr::Constant{1.0}));
  CHECK(!is_analytic(expr::Table{{1.0}}));
}

TEST_CASE("exponent system arithmetic") {
  const auto d = square(4);
  const auto sys = build_exponent_system(ScalarField::constant(d, 2.0), 1.0, 4.0);
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK(sys.q[i] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sys.conj[i] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sys.s[i] == doctest::Approx(3.0).epsilon(1e-14));
  }
  CHECK_THROWS(build_exponent_system(ScalarField::constant(d, 2.0), 2.0, 4.0));
  CHECK_THROWS(build_exponent_system(ScalarField::constant(d, 1.0), 0.5, 4.0));
  CHECK_THROWS(build_exponent_system(ScalarField::constant(d, 2.0), -0.1, 4.0));
}

TEST_CASE("alpha zero collapses q to p and s to p") {
  const auto d = square(6);
  const auto p = ScalarField::realize(d, expr::Linear{1.5, {1.0, 0.5}});
  const auto sys = build_exponent_system(p, 0.0);
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK(sys.q[i] == p[i]);
    CHECK(sys.s[i] == doctest::Approx(p[i]).epsilon(1e-14));
  }
}

TEST_CASE("pointwise exponent identities and shifted ordering") {
  const auto d = square(8);
  const auto p = ScalarField::realize(d, expr::LogPerturbed{1.6, 0.5, {0.3, 0.7}});
  const double alpha = 0.5;
  const double beta = 2.0;
  auto sys0 = build_exponent_system(p, alpha, beta);
  const double eps = 0.5 * epsilon_window(sys0);
  const auto sys = build_exponent_system(p, alpha, beta, eps);
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK(1.0 / p[i] + 1.0 / sys.conj[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(1.0 / sys.q[i] == doctest::Approx(1.0 / p[i] - alpha / beta).epsilon(1e-12));
    CHECK(sys.s[i] == doctest::Approx(1.0 + sys.q[i] / sys.conj[i]).epsilon(1e-12));
    CHECK((*sys.q_plus)[i] > sys.q[i]);
    CHECK(sys.q[i] > (*sys.q_minus)[i]);
    CHECK(1.0 / (*sys.q_plus)[i] == doctest::Approx(1.0 / p[i] - (alpha + eps) / beta).epsilon(1e-12));
    CHECK((*sys.s_minus)[i] == doctest::Approx(1.0 + (*sys.q_minus)[i] / sys.conj[i]).epsilon(1e-12));
  }
  CHECK(sys.s_plus_range->min <= sys.s_plus_range->max);
  CHECK_THROWS(build_exponent_system(p, alpha, beta, epsilon_window(sys0)));
  CHECK_THROWS(build_exponent_system(p, alpha, beta, 0.0));
}

TEST_CASE("epsilon window formula") {
  const auto d = square(4);
  // p = 2, alpha = 1, beta = 4: q = 4 so the window is min{1, 3, 1, 4 (1/2 - 1/4)} = 1.
  const auto sys = build_exponent_system(ScalarField::constant(d, 2.0), 1.0, 4.0);
  CHECK(epsilon_window(sys) == doctest::Approx(1.0));
  const auto sys2 = build_exponent_system(ScalarField::constant(d, 3.0), 0.5, 2.0);
  // q = 12: min{0.5, 1.5, 1/6, 2 (1/3 - 1/12)} = 1/6.
  CHECK(epsilon_window(sys2) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("omega set basics") {
  const auto d = line(20);
  CHECK(omega_set(ScalarField::constant(d, 3.0), 2.0, 0.1).size() == 20);
  CHECK(omega_set(ScalarField::constant(d, 2.0), 2.0, 0.1).empty());
  CHECK_THROWS(omega_set(ScalarField::constant(d, 3.0), 2.0, 0.0));
}

TEST_CASE("omega set of |x| matches a direct computation") {
  const auto d = line(40);
  const auto t = ScalarField::realize(d, expr::Power{{0.0}, 1.0});
  const auto om = omega_set(t, 0.5, 0.25);
  std::vector<std::uint32_t> expect;
  for (std::uint32_t i = 0; i < d->size(); ++i) {
    if (!(t[i] > 0.5)) {
      continue;
    }
    bool keep = true;
    for (std::size_t j = 0; j < d->size(); ++j) {
      if (!(t[j] > 0.5) && std::fabs(d->coords(i)[0] - d->coords(j)[0]) < 0.25) {
        keep = false;
      }
    }
    if (keep) {
      expect.push_back(i);
    }
  }
  CHECK(std::vector<std::uint32_t>(om.members().begin(), om.members().end()) == expect);
  for (const auto i : om.members()) {
    CHECK(std::fabs(d->coords(i)[0]) > 0.7);
  }
  CHECK(om.measure() == doctest::Approx(0.05 * static_cast<double>(expect.size())));
  CHECK(om.complement().size() + om.size() == d->size());
}

TEST_CASE("omega set is antitone in eps and r") {
  const auto d = square(12);
  const auto t = ScalarField::realize(d, expr::Linear{1.0, {1.0, 1.0}});
  for (const double r : {1.2, 1.6, 2.0}) {
    const auto a = omega_set(t, r, 0.05);
    const auto b = omega_set(t, r, 0.2);
    for (const auto i : b.members()) {
      CHECK(a.contains(i));
    }
    const auto c = omega_set(t, r + 0.3, 0.05);
    for (const auto i : c.members()) {
      CHECK(a.contains(i));
    }
  }
}

TEST_CASE("lowering r below s_* keeps every atom") {
  const auto d = square(10);
  const auto p = ScalarField::realize(d, expr::Linear{1.8, {0.4, 0.0}});
  const auto sys = build_exponent_system(p, 0.5);
  const double s_low = sys.s_range.min;
  for (const double frac : {0.01, 0.25, 0.5, 0.99}) {
    for (const double eps : {0.01, 0.3, 5.0}) {
      CHECK(omega_set(sys.s, s_low - frac * (s_low - 1.0), eps).size() == d->size());
    }
  }
}

TEST_CASE("find_epsilon0 scans the dyadic ladder") {
  const auto d = line(40);
  CHECK(find_epsilon0(ScalarField::constant(d, 3.0), 2.0) == doctest::Approx(0.5 * d->diameter()));
  CHECK_THROWS(find_epsilon0(ScalarField::constant(d, 1.0), 2.0));
  const auto t = ScalarField::realize(d, expr::Power{{0.0}, 1.0});
  const double e0 = find_epsilon0(t, 0.5);
  CHECK(e0 < 0.5);
  CHECK(!omega_set(t, 0.5, e0).empty());
  CHECK(omega_set(t, 0.5, 2.0 * e0).empty());
  double ladder = 0.5 * d->diameter();
  while (omega_set(t, 0.5, ladder).empty()) {
    ladder *= 0.5;
  }
  CHECK(e0 == ladder);
}

TEST_CASE("log-Hölder constant") {
  const auto d = line(64);
  CHECK(log_holder_constant(ScalarField::constant(d, 2.0)) == 0.0);
  const auto t = ScalarField::realize(d, expr::LogPerturbed{2.0, 1.0, {0.0}});
  std::vector<double> shifted(t.values().begin(), t.values().end());
  for (auto& v : shifted) {
    v += 7.0;
  }
  CHECK(log_holder_constant(ScalarField(d, shifted)) ==
        doctest::Approx(log_holder_constant(t)).epsilon(1e-12));
  CHECK(log_holder_constant(t) == doctest::Approx(brute_log_holder(t)).epsilon(1e-12));
  const auto single = std::make_shared<const DiscreteDomain>(
      DiscreteDomain(1, {{{0.0}, 1.0}, {{2.0}, 1.0}}, 1.0));
  CHECK_THROWS(log_holder_constant(ScalarField::constant(single, 1.0)));
}

TEST_CASE("log-perturbed field stays log-Hölder under refinement") {
  std::vector<double> c;
  // The estimate creeps up towards its supremum; from 128 cells on it moves
  // less than 20% over two doublings.
  for (const std::size_t n : {128, 256, 512}) {
    const auto t = ScalarField::realize(line(n), expr::LogPerturbed{2.0, 1.0, {0.0}});
    c.push_back(log_holder_constant(t));
    CHECK(c.back() == doctest::Approx(brute_log_holder(t)).epsilon(1e-12));
  }
  CHECK(c[2] <= 1.2 * c[0]);
  CHECK(c[2] >= c[0] / 1.2);
}

TEST_CASE("step field log-Hölder estimate grows near the jump") {
  std::vector<double> c;
  for (const std::size_t n : {4, 8, 16}) {
    c.push_back(log_holder_constant(ScalarField::realize(line(n), expr::Step{0, 0.0, 2.0, 3.0})));
  }
  CHECK(c[1] >= 1.5 * c[0]);
  CHECK(c[2] >= 1.5 * c[1]);
}
