#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "varlex/fields.hpp"

namespace varlex {

inline constexpr double kDefaultNormTolerance = 1e-10;

// Atoms to integrate over; nullopt means the whole domain.
using Subset = std::optional<std::span<const std::uint32_t>>;

inline Subset whole_domain() { return std::nullopt; }
inline Subset restrict_to(const OmegaSet& set) { return set.members(); }

struct NormResult {
  double value = 0.0;
  std::size_t iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};
  double modular_at_value = 0.0;
};

// sum over the subset of |f|^p * mass, summed exactly.
double modular(std::span<const double> f, std::span<const double> p,
               const DiscreteDomain& domain, Subset subset = std::nullopt);
double modular(const ScalarField& f, const ScalarField& p, Subset subset = std::nullopt);

// inf{lambda > 0 : modular(f / lambda) <= 1}, bracketed then bisected until the
// bracket is within `tol` relative. The returned value satisfies
// modular(f / value) <= 1.
NormResult luxemburg_norm(std::span<const double> f, std::span<const double> p,
                          const DiscreteDomain& domain, Subset subset = std::nullopt,
                          double tol = kDefaultNormTolerance);
NormResult luxemburg_norm(const ScalarField& f, const ScalarField& p,
                          Subset subset = std::nullopt, double tol = kDefaultNormTolerance);

struct HolderCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// lhs = sum |f g| dmu, rhs = ||f||_p ||g||_p'.
HolderCheck check_holder(const ScalarField& f, const ScalarField& g, const ScalarField& p);

}  // namespace varlex
