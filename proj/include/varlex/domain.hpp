#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varlex {

using Point = std::vector<double>;

struct Atom {
  Point coords;
  double mass = 0.0;
};

double linf_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(std::span<const double> a, std::span<const double> b);

// Closed axis-parallel cube Q(center, side): y is inside iff
// max_i |y_i - center_i| <= side / 2.
class Cube {
 public:
  Cube(Point center, double side);

  [[nodiscard]] const Point& center() const { return center_; }
  [[nodiscard]] double side() const { return side_; }
  [[nodiscard]] bool contains(std::span<const double> y) const;
  [[nodiscard]] Cube doubled() const { return Cube(center_, 2.0 * side_); }

 private:
  Point center_;
  double side_;
};

// Finite atomic approximation of a bounded measure space (Omega, mu) in R^n,
// together with the declared lower Ahlfors dimension. Immutable.
class DiscreteDomain {
 public:
  DiscreteDomain(std::size_t ambient_dim, std::vector<Atom> atoms, double ahlfors_dim);

  [[nodiscard]] std::size_t size() const { return mass_.size(); }
  [[nodiscard]] std::size_t ambient_dim() const { return dim_; }
  [[nodiscard]] double ahlfors_dim() const { return ahlfors_dim_; }
  // Max pairwise Euclidean distance between atoms (0 for a single atom).
  [[nodiscard]] double diameter() const { return diameter_; }
  // Smallest Euclidean distance between two distinct atoms (+inf for one atom).
  [[nodiscard]] double min_spacing() const { return min_spacing_; }
  [[nodiscard]] double total_mass() const { return total_mass_; }

  [[nodiscard]] std::span<const double> coords(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double mass(std::size_t i) const { return mass_[i]; }
  [[nodiscard]] std::span<const double> masses() const { return mass_; }
  [[nodiscard]] Atom atom(std::size_t i) const;

  // Radii below this floor are finer than the atomic approximation resolves.
  [[nodiscard]] double spacing_floor() const { return 2.0 * min_spacing_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> mass_;
  double ahlfors_dim_;
  double diameter_ = 0.0;
  double min_spacing_;
  double total_mass_ = 0.0;
};

// mu(Q), i.e. the mass of the atoms inside the closed cube.
double cube_measure(const DiscreteDomain& domain, const Cube& q);

// min over (x, l) of mu(Q(x, l)) / l^beta. Radii must lie in
// [spacing_floor, diameter); centers index atoms.
double ahlfors_constant(const DiscreteDomain& domain, std::span<const double> radii,
                        std::span<const std::size_t> centers);

// Radii diameter * 2^-k (k >= 1) down to the spacing floor.
std::vector<double> dyadic_radii(const DiscreteDomain& domain);

struct DoublingSample {
  double side;
  double ratio;  // mu(2Q) / mu(Q); +inf when mu(Q) = 0 < mu(2Q); NaN when both are 0
};

std::vector<DoublingSample> doubling_probe(const DiscreteDomain& domain,
                                           std::span<const Cube> cubes);

// Midpoint-rule discretization of Lebesgue measure on the box [lo, hi].
DiscreteDomain build_lebesgue_grid(std::size_t dim, const Point& lo, const Point& hi,
                                   const std::vector<std::size_t>& resolution);

// Unit cube [0,1]^dim with `resolution` cells per axis.
DiscreteDomain build_unit_grid(std::size_t dim, std::size_t resolution);

// Diagonal segment {(x,x): 0<x<1} with arclength measure joined to the square
// (-1,0)^2 with area measure; lower Ahlfors 2-regular but not doubling.
DiscreteDomain build_example_domain(std::size_t resolution);

// Cubes [-s,0]^2 touching the junction of the two pieces of the example domain.
std::vector<Cube> example_corner_cubes(std::span<const double> sides);

}  // namespace varlex
