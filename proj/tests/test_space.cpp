#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "varlex/rng.hpp"
#include "varlex/space.hpp"

using namespace varlex;

namespace {

DomainPtr random_domain(Rng& rng, std::size_t n) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back({{rng.uniform(), rng.uniform()}, rng.uniform(0.01, 0.1)});
  }
  return std::make_shared<const DiscreteDomain>(2, std::move(atoms), 2.0);
}

std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = rng.uniform(lo, hi);
  }
  return v;
}

}  // namespace

TEST_CASE("modular examples") {
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, 4));
  CHECK(modular(ScalarField::constant(d, 0.0), ScalarField::constant(d, 2.0)) == 0.0);
  CHECK(modular(ScalarField::constant(d, 2.0), ScalarField::constant(d, 2.0)) == 4.0);
  const auto p = ScalarField::realize(d, expr::Linear{1.0, {1.0, 2.0}});
  CHECK(modular(ScalarField::constant(d, 1.0), p) == 1.0);
  const std::vector<std::uint32_t> sub{0, 3, 5};
  CHECK(modular(ScalarField::constant(d, 1.0), p, std::span<const std::uint32_t>(sub)) == 3.0 / 16);
  CHECK_THROWS(modular(ScalarField::constant(d, 1.0), ScalarField::constant(d, 0.5)));
}

TEST_CASE("norm examples") {
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, 4));
  const auto two = ScalarField::constant(d, 2.0);
  const auto r = luxemburg_norm(two, two);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.modular_at_value <= 1.0);
  CHECK(r.bracket.first <= r.value);
  const auto z = luxemburg_norm(ScalarField::constant(d, 0.0), two);
  CHECK(z.value == 0.0);
  CHECK(z.iterations == 0);
  std::vector<double> bad(d->size(), 1.0);
  bad[3] = INFINITY;
  CHECK_THROWS(luxemburg_norm(bad, two.values(), *d));
}

TEST_CASE("two-piece exponent solves the cubic") {
  const auto d = std::make_shared<const DiscreteDomain>(build_lebesgue_grid(1, {0.0}, {1.0}, {10}));
  const auto p = ScalarField::realize(d, expr::Step{0, 0.5, 2.0, 3.0});
  // Newton on g(l) = 0.5 l^-2 + 0.5 l^-3 - 1.
  long double l = 1.0L;
  for (int k = 0; k < 60; ++k) {
    const long double g = 0.5L / (l * l) + 0.5L / (l * l * l) - 1.0L;
    const long double dg = -1.0L / (l * l * l) - 1.5L / (l * l * l * l);
    l -= g / dg;
  }
  const double got = luxemburg_norm(ScalarField::constant(d, 1.0), p).value;
  CHECK(got == doctest::Approx(static_cast<double>(l)).epsilon(1e-9));
  // Scaled variant: f = 3 on the left piece, 0.5 on the right.
  const auto f = ScalarField::realize(d, expr::Step{0, 0.5, 3.0, 0.5});
  l = 2.0L;
  for (int k = 0; k < 80; ++k) {
    const long double g = 0.5L * 9.0L / (l * l) + 0.5L * 0.125L / (l * l * l) - 1.0L;
    const long double dg = -9.0L / (l * l * l) - 0.1875L / (l * l * l * l);
    l -= g / dg;
  }
  CHECK(luxemburg_norm(f, p).value == doctest::Approx(static_cast<double>(l)).epsilon(1e-9));
}

TEST_CASE("constant exponent closed form") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_domain(rng, 5 + rng.index(60));
    const double p0 = std::vector<double>{1.5, 2.0, 3.0}[rng.index(3)];
    const auto f = random_values(rng, d->size(), -3.0, 3.0);
    const std::vector<double> p(d->size(), p0);
    const double expect =
        static_cast<double>(std::pow(oracle::modular(f, p, {d->masses().begin(), d->masses().end()}, 1.0L), 1.0L / p0));
    CHECK(luxemburg_norm(f, p, *d).value == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("variable exponent matches a dense scan") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_domain(rng, 2 + rng.index(63));
    const auto f = random_values(rng, d->size(), 0.0, 5.0);
    const auto p = random_values(rng, d->size(), 1.1, 4.0);
    const std::vector<double> m(d->masses().begin(), d->masses().end());
    CHECK(luxemburg_norm(f, p, *d).value ==
          doctest::Approx(oracle::dense_scan_norm(f, p, m)).epsilon(1e-6));
  }
}

TEST_CASE("norm axioms on random cases") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto d = random_domain(rng, 3 + rng.index(40));
    const std::size_t n = d->size();
    const auto f = random_values(rng, n, -2.0, 2.0);
    const auto g = random_values(rng, n, -2.0, 2.0);
    const auto p = random_values(rng, n, 1.05, 5.0);
    const double nf = luxemburg_norm(f, p, *d).value;
    const double ng = luxemburg_norm(g, p, *d).value;
    const double c = rng.uniform(-10.0, 10.0);
    std::vector<double> cf(n), sum(n), big(n);
    for (std::size_t i = 0; i < n; ++i) {
      cf[i] = c * f[i];
      sum[i] = f[i] + g[i];
      big[i] = std::fabs(f[i]) + rng.uniform();
    }
    CHECK(luxemburg_norm(cf, p, *d).value == doctest::Approx(std::fabs(c) * nf).epsilon(1e-9));
    CHECK(luxemburg_norm(sum, p, *d).value <= nf + ng + 1e-9);
    CHECK(nf <= luxemburg_norm(big, p, *d).value + 1e-9);
    std::vector<double> unit(n);
    for (std::size_t i = 0; i < n; ++i) {
      unit[i] = f[i] / nf;
    }
    CHECK(std::fabs(modular(unit, p, *d) - 1.0) <= 1e-8);
  }
}

TEST_CASE("norm over a subset ignores the rest") {
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(1, 4));
  const std::vector<double> f{1.0, 100.0, 1.0, 100.0};
  const std::vector<double> p(4, 2.0);
  const std::vector<std::uint32_t> sub{0, 2};
  CHECK(luxemburg_norm(f, p, *d, std::span<const std::uint32_t>(sub)).value ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}

TEST_CASE("Hölder ratio") {
  Rng rng(14);
  for (int t = 0; t < 300; ++t) {
    const auto d = random_domain(rng, 2 + rng.index(30));
    const std::size_t n = d->size();
    const ScalarField f(d, random_values(rng, n, -3.0, 3.0));
    const ScalarField g(d, random_values(rng, n, -3.0, 3.0));
    const ScalarField p(d, random_values(rng, n, 1.05, 6.0));
    const auto h = check_holder(f, g, p);
    CHECK(h.ratio <= 2.0);
    CHECK(h.ratio >= 0.0);
  }
  const auto d = std::make_shared<const DiscreteDomain>(build_unit_grid(2, 5));
  const auto f = ScalarField::realize(d, expr::Linear{0.3, {1.0, -2.0}});
  const auto two = ScalarField::constant(d, 2.0);
  CHECK(check_holder(f, f, two).ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_holder(ScalarField::constant(d, 0.0), f, two).ratio == 0.0);
  CHECK_THROWS(check_holder(f, f, ScalarField::constant(d, 1.0)));
}
