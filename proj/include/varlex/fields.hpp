#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "varlex/domain.hpp"

namespace varlex {

using DomainPtr = std::shared_ptr<const DiscreteDomain>;

// Analytic descriptors. Refinement studies re-evaluate these on every
// resolution instead of interpolating samples.
namespace expr {

struct Constant {
  double value = 0.0;
};

// |x - x0|^eta
struct Power {
  Point x0;
  double eta = 0.0;
};

// prod_i |x_i - center_i|^eta_i
struct ProductPower {
  Point center;
  std::vector<double> eta;
};

// base + amplitude / log(e + 1/|x - x0|); equals `base` at x0.
struct LogPerturbed {
  double base = 0.0;
  double amplitude = 0.0;
  Point x0;
};

// base + gradient . x
struct Linear {
  double base = 0.0;
  std::vector<double> gradient;
};

// below if x[axis] < at, else above
struct Step {
  std::size_t axis = 0;
  double at = 0.0;
  double below = 0.0;
  double above = 0.0;
};

// max(1, max_i |x - x_i|^-theta). An atom sitting on a singularity is
// evaluated at half the minimum atom spacing.
struct ClippedPower {
  std::vector<Point> singularities;
  double theta = 0.0;
};

// On the diagonal piece (x > 0): x^a. On the square piece: |x y|^a.
struct ExampleWeight {
  double a = 0.0;
};

struct Table {
  std::vector<double> values;
};

}  // namespace expr

using FieldExpr = std::variant<expr::Constant, expr::Power, expr::ProductPower,
                               expr::LogPerturbed, expr::Linear, expr::Step,
                               expr::ClippedPower, expr::ExampleWeight, expr::Table>;

std::string kind_name(const FieldExpr& e);

// True for descriptors that can be re-evaluated on a different domain.
bool is_analytic(const FieldExpr& e);

// Evaluates an analytic descriptor at a point. `distance_floor` replaces a zero
// distance to a clipped-power singularity. Throws for tables.
double evaluate(const FieldExpr& e, std::span<const double> x, double distance_floor = 0.0);

// One finite real value per atom of a domain.
class ScalarField {
 public:
  ScalarField(DomainPtr domain, std::vector<double> values,
              std::optional<FieldExpr> descriptor = std::nullopt);

  static ScalarField constant(DomainPtr domain, double c);
  static ScalarField realize(DomainPtr domain, const FieldExpr& e);

  [[nodiscard]] const DiscreteDomain& domain() const { return *domain_; }
  [[nodiscard]] const DomainPtr& domain_ptr() const { return domain_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const std::optional<FieldExpr>& descriptor() const { return descriptor_; }
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;

 private:
  DomainPtr domain_;
  std::vector<double> values_;
  std::optional<FieldExpr> descriptor_;
};

struct Range {
  double min = 0.0;
  double max = 0.0;
};

// An exponent p together with everything derived from it for fractional
// operators of order alpha on a beta-dimensional measure:
//   1/p + 1/p' = 1,  1/q = 1/p - alpha/beta,  s = 1 + q/p',
// and, when epsilon is set, 1/q_eps^(+/-) = 1/p - (alpha +/- eps)/beta and
// s_eps^(+/-) = 1 + q_eps^(+/-)/p'.
struct ExponentSystem {
  ScalarField p;
  ScalarField conj;
  ScalarField q;
  ScalarField s;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> epsilon;
  std::optional<ScalarField> q_plus;
  std::optional<ScalarField> q_minus;
  std::optional<ScalarField> s_plus;
  std::optional<ScalarField> s_minus;

  Range p_range, q_range, s_range;
  std::optional<Range> s_plus_range, s_minus_range;
};

// Upper bound on admissible epsilon for the shifted exponents:
// min{alpha, beta - alpha, beta/q^*, beta (1/p^* - 1/q_*)}.
double epsilon_window(const ExponentSystem& sys);

// beta defaults to the domain's Ahlfors dimension when not given.
ExponentSystem build_exponent_system(const ScalarField& p, double alpha,
                                     std::optional<double> beta = std::nullopt,
                                     std::optional<double> epsilon = std::nullopt);

// Atoms x with t(x) > r lying at Euclidean distance >= eps from every atom
// y with t(y) <= r (the open eps-balls around the sublevel set are removed).
class OmegaSet {
 public:
  OmegaSet(DomainPtr domain, std::vector<std::uint32_t> members, double r, double eps);

  [[nodiscard]] const DiscreteDomain& domain() const { return *domain_; }
  [[nodiscard]] std::span<const std::uint32_t> members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(std::size_t atom) const;
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double measure() const;
  // Complement within the domain, in increasing atom order.
  [[nodiscard]] std::vector<std::uint32_t> complement() const;

 private:
  DomainPtr domain_;
  std::vector<std::uint32_t> members_;
  std::vector<bool> mask_;
  double r_;
  double eps_;
};

OmegaSet omega_set(const ScalarField& t, double r, double eps);

// Largest eps in {diameter * 2^-k : k >= 1} leaving omega_set(t, r, eps) nonempty.
double find_epsilon0(const ScalarField& t, double r);

// max over atom pairs with 0 < |x-y| <= 1/2 of |t(x)-t(y)| log(1/|x-y|).
double log_holder_constant(const ScalarField& t);

}  // namespace varlex
