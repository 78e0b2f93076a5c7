#include "varlex/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "varlex/exact_sum.hpp"

namespace varlex {

double linf_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::fabs(a[i] - b[i]));
  }
  return d;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

Cube::Cube(Point center, double side) : center_(std::move(center)), side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("cube side must be positive and finite");
  }
}

bool Cube::contains(std::span<const double> y) const {
  return linf_distance(center_, y) <= side_ * 0.5;
}

DiscreteDomain::DiscreteDomain(std::size_t ambient_dim, std::vector<Atom> atoms,
                               double ahlfors_dim)
    : dim_(ambient_dim),
      ahlfors_dim_(ahlfors_dim),
      min_spacing_(std::numeric_limits<double>::infinity()) {
  if (dim_ == 0) {
    throw std::invalid_argument("ambient dimension must be positive");
  }
  if (atoms.empty()) {
    throw std::invalid_argument("domain needs at least one atom");
  }
  if (!(ahlfors_dim > 0.0) || !std::isfinite(ahlfors_dim)) {
    throw std::invalid_argument("ahlfors_dim must be positive and finite");
  }
  coords_.reserve(atoms.size() * dim_);
  mass_.reserve(atoms.size());
  ExactSum total;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (a.coords.size() != dim_) {
      throw std::invalid_argument("atom " + std::to_string(i) + " has " +
                                  std::to_string(a.coords.size()) + " coords, expected " +
                                  std::to_string(dim_));
    }
    for (const double c : a.coords) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("atom " + std::to_string(i) + " has non-finite coords");
      }
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw std::invalid_argument("atom " + std::to_string(i) +
                                  " mass must be positive and finite");
    }
    coords_.insert(coords_.end(), a.coords.begin(), a.coords.end());
    mass_.push_back(a.mass);
    total.add(a.mass);
  }
  total_mass_ = total.value();

  const auto n = static_cast<std::ptrdiff_t>(mass_.size());
  double diam = 0.0;
  double spacing = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 16) reduction(max : diam) reduction(min : spacing)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto xi = coords(static_cast<std::size_t>(i));
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      const double d = l2_distance(xi, coords(static_cast<std::size_t>(j)));
      diam = std::max(diam, d);
      spacing = std::min(spacing, d);
    }
  }
  diameter_ = diam;
  min_spacing_ = spacing;
}

Atom DiscreteDomain::atom(std::size_t i) const {
  const auto c = coords(i);
  return Atom{Point(c.begin(), c.end()), mass_[i]};
}

double cube_measure(const DiscreteDomain& domain, const Cube& q) {
  ExactSum acc;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (q.contains(domain.coords(i))) {
      acc.add(domain.mass(i));
    }
  }
  return acc.value();
}

double ahlfors_constant(const DiscreteDomain& domain, std::span<const double> radii,
                        std::span<const std::size_t> centers) {
  if (radii.empty() || centers.empty()) {
    throw std::invalid_argument("ahlfors_constant needs radii and centers");
  }
  for (const double l : radii) {
    if (!(l > 0.0) || !(l < domain.diameter())) {
      throw std::invalid_argument("radius " + std::to_string(l) +
                                  " outside (0, diameter); the lower bound is only "
                                  "required for cubes smaller than the domain");
    }
    if (l < domain.spacing_floor()) {
      throw std::invalid_argument("radius " + std::to_string(l) +
                                  " below the atom spacing floor " +
                                  std::to_string(domain.spacing_floor()));
    }
  }
  for (const std::size_t c : centers) {
    if (c >= domain.size()) {
      throw std::out_of_range("ahlfors center index out of range");
    }
  }
  const double beta = domain.ahlfors_dim();
  const auto nc = static_cast<std::ptrdiff_t>(centers.size());
  double c_hat = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 8) reduction(min : c_hat)
  for (std::ptrdiff_t k = 0; k < nc; ++k) {
    const auto x = domain.coords(centers[static_cast<std::size_t>(k)]);
    for (const double l : radii) {
      const Cube q(Point(x.begin(), x.end()), l);
      c_hat = std::min(c_hat, cube_measure(domain, q) / std::pow(l, beta));
    }
  }
  return c_hat;
}

std::vector<double> dyadic_radii(const DiscreteDomain& domain) {
  std::vector<double> radii;
  const double floor = domain.spacing_floor();
  for (double l = domain.diameter() * 0.5; l >= floor && l > 0.0; l *= 0.5) {
    radii.push_back(l);
  }
  return radii;
}

std::vector<DoublingSample> doubling_probe(const DiscreteDomain& domain,
                                           std::span<const Cube> cubes) {
  std::vector<DoublingSample> out;
  out.reserve(cubes.size());
  for (const Cube& q : cubes) {
    if (!(2.0 * q.side() < 2.0 * domain.diameter())) {
      throw std::invalid_argument("doubled cube must have side below twice the diameter");
    }
    const double inner = cube_measure(domain, q);
    const double outer = cube_measure(domain, q.doubled());
    double ratio;
    if (inner > 0.0) {
      ratio = outer / inner;
    } else if (outer > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back({q.side(), ratio});
  }
  return out;
}

DiscreteDomain build_lebesgue_grid(std::size_t dim, const Point& lo, const Point& hi,
                                   const std::vector<std::size_t>& resolution) {
  if (dim == 0 || lo.size() != dim || hi.size() != dim || resolution.size() != dim) {
    throw std::invalid_argument("grid box and resolution must match the dimension");
  }
  double cell = 1.0;
  std::size_t count = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(hi[k] > lo[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k])) {
      throw std::invalid_argument("degenerate grid box on axis " + std::to_string(k));
    }
    if (resolution[k] < 2) {
      throw std::invalid_argument("grid resolution must be at least 2 per axis");
    }
    cell *= (hi[k] - lo[k]) / static_cast<double>(resolution[k]);
    count *= resolution[k];
  }
  std::vector<Atom> atoms;
  atoms.reserve(count);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t n = 0; n < count; ++n) {
    Point x(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const double h = (hi[k] - lo[k]) / static_cast<double>(resolution[k]);
      x[k] = lo[k] + (static_cast<double>(idx[k]) + 0.5) * h;
    }
    atoms.push_back({std::move(x), cell});
    for (std::size_t k = dim; k-- > 0;) {
      if (++idx[k] < resolution[k]) {
        break;
      }
      idx[k] = 0;
    }
  }
  return DiscreteDomain(dim, std::move(atoms), static_cast<double>(dim));
}

DiscreteDomain build_unit_grid(std::size_t dim, std::size_t resolution) {
  return build_lebesgue_grid(dim, Point(dim, 0.0), Point(dim, 1.0),
                             std::vector<std::size_t>(dim, resolution));
}

DiscreteDomain build_example_domain(std::size_t resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("example domain resolution must be at least 2");
  }
  const double h = 1.0 / static_cast<double>(resolution);
  std::vector<Atom> atoms;
  atoms.reserve(resolution + resolution * resolution);
  // Arclength measure on the diagonal: each segment of run h has length sqrt(2) h.
  for (std::size_t i = 0; i < resolution; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * h;
    atoms.push_back({{x, x}, std::sqrt(2.0) * h});
  }
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      atoms.push_back({{-1.0 + (static_cast<double>(i) + 0.5) * h,
                        -1.0 + (static_cast<double>(j) + 0.5) * h},
                       h * h});
    }
  }
  return DiscreteDomain(2, std::move(atoms), 2.0);
}

std::vector<Cube> example_corner_cubes(std::span<const double> sides) {
  std::vector<Cube> cubes;
  cubes.reserve(sides.size());
  for (const double s : sides) {
    cubes.emplace_back(Point{-0.5 * s, -0.5 * s}, s);
  }
  return cubes;
}

}  // namespace varlex
