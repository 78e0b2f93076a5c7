#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varlex/cube_index.hpp"
#include "varlex/fields.hpp"

namespace varlex {

enum class Mode { exact, dyadic };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

inline constexpr int kDefaultDyadicDepth = 20;

struct MaximalOptions {
  Mode mode = Mode::exact;
  int depth = kDefaultDyadicDepth;
  std::optional<double> beta;  // defaults to the domain's Ahlfors dimension
};

struct OperatorOutput {
  ScalarField field;
  // Side of the maximizing cube per atom; empty for the fractional integral.
  // Side 0 is the degenerate cube holding only atoms at the center.
  std::vector<double> argmax_side;
  Mode mode = Mode::exact;
};

// Cube quotient mu^(alpha/beta - 1) * integral, evaluated as
// (integral / mu) * mu_pow with mu_pow = mu^(alpha/beta).
inline double maximal_quotient(double integral, double mu, double mu_pow) {
  return integral / mu * mu_pow;
}

// Kernel weight |x-y|^alpha * mass(y) / mu(Q(x, 2|x-y|)).
double frint_weight(double distance, double alpha, double mass_y, double mu);

// Centered fractional maximal function of |f|. Exact mode takes the sup over
// every distinct cube centered at the atom (all shells) and the cube of side
// 2 * diameter; dyadic mode over sides diameter * 2^-k, k = 0..depth.
OperatorOutput maximal(const ScalarField& f, const CubeIndex& index, double alpha,
                       const MaximalOptions& opt = {});
OperatorOutput maximal(const ScalarField& f, double alpha, const MaximalOptions& opt = {});

// out[fi * alphas.size() + ai][atom] = M_{alphas[ai]} fields[fi] at atom.
// Shell integrals are shared across alphas.
std::vector<std::vector<double>> maximal_batch(const CubeIndex& index,
                                               std::span<const std::vector<double>> fields,
                                               std::span<const double> alphas,
                                               const MaximalOptions& opt = {});

// I_alpha f(x) = sum_{y != x} f(y) |x-y|^alpha mass(y) / mu(Q(x, 2|x-y|)).
OperatorOutput fractional_integral(const ScalarField& f, const CubeIndex& index, double alpha,
                                   std::optional<double> beta = std::nullopt);
OperatorOutput fractional_integral(const ScalarField& f, double alpha,
                                   std::optional<double> beta = std::nullopt);

std::vector<std::vector<double>> fractional_integral_batch(
    const CubeIndex& index, std::span<const std::vector<double>> fields, double alpha,
    std::optional<double> beta = std::nullopt);

// Serial brute force without the cube index: every candidate cube is
// measured by a full scan. O(N^3); for tests and benchmarks.
namespace reference {

OperatorOutput maximal(const ScalarField& f, double alpha, const MaximalOptions& opt = {});
OperatorOutput fractional_integral(const ScalarField& f, double alpha,
                                   std::optional<double> beta = std::nullopt);

}  // namespace reference

}  // namespace varlex
