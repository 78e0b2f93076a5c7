#include <doctest.h>

#include <memory>
#include <vector>

#include "oracles.hpp"
#include "varlex/cube_index.hpp"
#include "varlex/rng.hpp"

using namespace varlex;

TEST_CASE("shells match a brute-force scan") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<Atom> atoms;
    const std::size_t n = 5 + rng.index(25);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse coordinates force distance ties.
      atoms.push_back({{0.25 * static_cast<double>(rng.index(5)), 0.25 * static_cast<double>(rng.index(5))},
                       rng.uniform(0.1, 1.0)});
    }
    const auto d = std::make_shared<const DiscreteDomain>(2, std::move(atoms), 2.0);
    const CubeIndex idx(d);
    for (std::size_t c = 0; c < n; ++c) {
      const auto crit = oracle::critical_half_sides(*d, c);
      const auto sh = idx.shells(c);
      REQUIRE(sh.size() == crit.size());
      for (std::size_t k = 0; k < sh.size(); ++k) {
        CHECK(sh[k].half_side == static_cast<double>(crit[k]));
        CHECK(sh[k].mass == doctest::Approx(static_cast<double>(oracle::cube_mass(*d, c, crit[k]))));
        std::size_t inside = 0;
        for (std::size_t y = 0; y < n; ++y) {
          inside += oracle::linf(*d, c, y) <= crit[k] ? 1 : 0;
        }
        CHECK(sh[k].end == inside);
      }
      const auto ord = idx.order(c);
      for (std::size_t k = 1; k < n; ++k) {
        CHECK(oracle::linf(*d, c, ord[k - 1]) <= oracle::linf(*d, c, ord[k]));
      }
      CHECK(oracle::linf(*d, c, ord[0]) == 0);
      CHECK(idx.shell_at(c, 0.0) == 0);
      CHECK(idx.shell_at(c, 100.0) == sh.size() - 1);
      for (std::size_t k = 0; k < sh.size(); ++k) {
        CHECK(idx.shell_at(c, sh[k].half_side) == k);
      }
    }
  }
}

TEST_CASE("shell masses agree with cube_measure") {
  const auto d = std::make_shared<const DiscreteDomain>(build_example_domain(6));
  const CubeIndex idx(d);
  for (std::size_t c = 0; c < d->size(); c += 3) {
    const Point x(d->coords(c).begin(), d->coords(c).end());
    for (const auto& s : idx.shells(c)) {
      if (s.half_side == 0.0) {
        continue;
      }
      CHECK(s.mass == doctest::Approx(cube_measure(*d, Cube(x, 2.0 * s.half_side))));
    }
  }
  CHECK_THROWS((void)idx.shell_at(0, -1.0));
}
