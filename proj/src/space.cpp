#include "varlex/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "varlex/exact_sum.hpp"

namespace varlex {

namespace {

struct Term {
  double abs_f;
  double p;
  double mass;
};

void check_sizes(std::span<const double> f, std::span<const double> p,
                 const DiscreteDomain& domain) {
  if (f.size() != domain.size() || p.size() != domain.size()) {
    throw std::invalid_argument("field sizes do not match the domain");
  }
}

template <class Fn>
void for_each_atom(const DiscreteDomain& domain, Subset subset, Fn&& fn) {
  if (subset) {
    for (const auto i : *subset) {
      fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      fn(i);
    }
  }
}

double modular_of(std::span<const Term> terms, double lambda) {
  ExactSum acc;
  for (const Term& t : terms) {
    acc.add(std::pow(t.abs_f / lambda, t.p) * t.mass);
  }
  return acc.value();
}

}  // namespace

double modular(std::span<const double> f, std::span<const double> p,
               const DiscreteDomain& domain, Subset subset) {
  check_sizes(f, p, domain);
  ExactSum acc;
  for_each_atom(domain, subset, [&](std::size_t i) {
    if (p[i] < 1.0) {
      throw std::invalid_argument("modular requires p >= 1 (atom " + std::to_string(i) + ")");
    }
    acc.add(std::pow(std::fabs(f[i]), p[i]) * domain.mass(i));
  });
  return acc.value();
}

double modular(const ScalarField& f, const ScalarField& p, Subset subset) {
  return modular(f.values(), p.values(), f.domain(), subset);
}

NormResult luxemburg_norm(std::span<const double> f, std::span<const double> p,
                          const DiscreteDomain& domain, Subset subset, double tol) {
  check_sizes(f, p, domain);
  if (!(tol > 0.0)) {
    throw std::invalid_argument("norm tolerance must be positive");
  }
  std::vector<Term> terms;
  double p_lo = std::numeric_limits<double>::infinity();
  double f_max = 0.0;
  for_each_atom(domain, subset, [&](std::size_t i) {
    if (!std::isfinite(f[i])) {
      throw std::invalid_argument("non-finite function value at atom " + std::to_string(i));
    }
    if (!std::isfinite(p[i]) || p[i] < 1.0) {
      throw std::invalid_argument("exponent must be finite and >= 1 (atom " +
                                  std::to_string(i) + ")");
    }
    if (f[i] != 0.0) {
      terms.push_back({std::fabs(f[i]), p[i], domain.mass(i)});
      p_lo = std::min(p_lo, p[i]);
      f_max = std::max(f_max, std::fabs(f[i]));
    }
  });
  NormResult res;
  if (terms.empty()) {
    return res;
  }

  auto rho = [&](double lambda) {
    ++res.iterations;
    return modular_of(terms, lambda);
  };

  double guess = std::pow(modular_of(terms, 1.0), 1.0 / p_lo);
  if (!std::isfinite(guess) || !(guess > 0.0)) {
    guess = f_max;
  }
  constexpr int kMaxDoublings = 4096;
  double lo = guess;
  double hi = guess;
  for (int k = 0; rho(lo) < 1.0; ++k) {
    if (k == kMaxDoublings) {
      throw std::runtime_error("luxemburg_norm: failed to bracket from below");
    }
    lo *= 0.5;
  }
  for (int k = 0; rho(hi) > 1.0; ++k) {
    if (k == kMaxDoublings) {
      throw std::runtime_error("luxemburg_norm: failed to bracket from above");
    }
    hi *= 2.0;
  }
  // Invariant: rho(lo) >= 1 >= rho(hi).
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.value = hi;
  res.bracket = {lo, hi};
  res.modular_at_value = modular_of(terms, hi);
  return res;
}

NormResult luxemburg_norm(const ScalarField& f, const ScalarField& p, Subset subset,
                          double tol) {
  return luxemburg_norm(f.values(), p.values(), f.domain(), subset, tol);
}

HolderCheck check_holder(const ScalarField& f, const ScalarField& g, const ScalarField& p) {
  const DiscreteDomain& dom = f.domain();
  if (g.size() != dom.size() || p.size() != dom.size()) {
    throw std::invalid_argument("check_holder: field sizes differ");
  }
  if (!(p.min() > 1.0)) {
    throw std::invalid_argument("check_holder requires p_* > 1");
  }
  std::vector<double> conj(p.size());
  ExactSum lhs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    conj[i] = p[i] / (p[i] - 1.0);
    lhs.add(std::fabs(f[i] * g[i]) * dom.mass(i));
  }
  HolderCheck out;
  out.lhs = lhs.value();
  out.rhs = luxemburg_norm(f.values(), p.values(), dom).value *
            luxemburg_norm(g.values(), conj, dom).value;
  if (out.rhs > 0.0) {
    out.ratio = out.lhs / out.rhs;
  } else if (out.lhs > 0.0) {
    throw std::logic_error("check_holder: zero norm product with positive integral");
  }
  return out;
}

}  // namespace varlex
