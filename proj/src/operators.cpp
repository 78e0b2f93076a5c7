#include "varlex/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "varlex/exact_sum.hpp"

namespace varlex {

std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "dyadic"; }

Mode parse_mode(const std::string& s) {
  if (s == "exact") {
    return Mode::exact;
  }
  if (s == "dyadic") {
    return Mode::dyadic;
  }
  throw std::invalid_argument("mode must be exact or dyadic, got '" + s + "'");
}

double frint_weight(double distance, double alpha, double mass_y, double mu) {
  return std::pow(distance, alpha) * mass_y / mu;
}

namespace {

double resolve_beta(const DiscreteDomain& dom, std::optional<double> beta) {
  const double b = beta.value_or(dom.ahlfors_dim());
  if (!(b > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
  return b;
}

void check_maximal_alpha(double alpha, double beta) {
  if (!(alpha >= 0.0) || !(alpha < beta)) {
    throw std::invalid_argument("maximal operator needs 0 <= alpha < beta; got alpha = " +
                                std::to_string(alpha) + ", beta = " + std::to_string(beta));
  }
}

void check_frint_alpha(double alpha, double beta) {
  if (!(alpha > 0.0) || !(alpha < beta)) {
    throw std::invalid_argument("fractional integral needs 0 < alpha < beta; got alpha = " +
                                std::to_string(alpha) + ", beta = " + std::to_string(beta));
  }
}

void check_depth(const MaximalOptions& opt) {
  if (opt.mode == Mode::dyadic && (opt.depth < 0 || opt.depth > 1000)) {
    throw std::invalid_argument("dyadic depth must lie in [0, 1000]");
  }
}

void check_field(std::span<const double> f, std::size_t n) {
  if (f.size() != n) {
    throw std::invalid_argument("field size does not match the cube index");
  }
  for (const double v : f) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("operator input must be finite");
    }
  }
}

double dyadic_side(double diameter, int k) { return diameter * std::ldexp(1.0, -k); }

struct Reduced {
  double value;
  double side;
};

// Sup over the shell values of one center; `vals` holds one quotient per shell.
Reduced reduce_shells(const CubeIndex& index, std::size_t c, std::span<const double> vals,
                      const MaximalOptions& opt) {
  const auto shells = index.shells(c);
  Reduced best{-1.0, 0.0};
  if (opt.mode == Mode::exact) {
    for (std::size_t k = 0; k < shells.size(); ++k) {
      if (vals[k] > best.value) {
        best = {vals[k], 2.0 * shells[k].half_side};
      }
    }
    // The cube of side 2 * diameter holds every atom, i.e. the last shell.
    const double diam = index.domain().diameter();
    if (vals.back() > best.value) {
      best = {vals.back(), 2.0 * diam};
    }
  } else {
    const double diam = index.domain().diameter();
    for (int k = opt.depth; k >= 0; --k) {
      const double side = dyadic_side(diam, k);
      const std::size_t j = index.shell_at(c, side * 0.5);
      if (vals[j] > best.value) {
        best = {vals[j], side};
      }
    }
  }
  return best;
}

}  // namespace

std::vector<std::vector<double>> maximal_batch(const CubeIndex& index,
                                               std::span<const std::vector<double>> fields,
                                               std::span<const double> alphas,
                                               const MaximalOptions& opt) {
  const DiscreteDomain& dom = index.domain();
  const double beta = resolve_beta(dom, opt.beta);
  check_depth(opt);
  for (const double a : alphas) {
    check_maximal_alpha(a, beta);
  }
  const std::size_t n = index.size();
  const std::size_t nf = fields.size();
  const std::size_t na = alphas.size();
  // Atom-major so one pass over a center's ordering feeds every field.
  std::vector<double> fm(n * nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    check_field(fields[fi], n);
    for (std::size_t y = 0; y < n; ++y) {
      fm[y * nf + fi] = std::fabs(fields[fi][y]) * dom.mass(y);
    }
  }
  std::vector<std::vector<double>> out(nf * na, std::vector<double>(n));

  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<ExactSum> acc(nf);
    std::vector<double> integral;
    std::vector<double> mu_pow;
    std::vector<double> vals;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t ci = 0; ci < nn; ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const auto order = index.order(c);
      const auto shells = index.shells(c);
      const std::size_t ns = shells.size();
      integral.resize(ns * nf);
      vals.resize(ns);
      mu_pow.resize(ns * na);
      for (std::size_t ai = 0; ai < na; ++ai) {
        const double g = alphas[ai] / beta;
        for (std::size_t k = 0; k < ns; ++k) {
          mu_pow[ai * ns + k] = std::pow(shells[k].mass, g);
        }
      }
      for (auto& a : acc) {
        a.reset();
      }
      std::size_t pos = 0;
      for (std::size_t k = 0; k < ns; ++k) {
        for (; pos < shells[k].end; ++pos) {
          const double* row = fm.data() + order[pos] * nf;
          for (std::size_t fi = 0; fi < nf; ++fi) {
            acc[fi].add(row[fi]);
          }
        }
        for (std::size_t fi = 0; fi < nf; ++fi) {
          integral[fi * ns + k] = acc[fi].value();
        }
      }
      for (std::size_t fi = 0; fi < nf; ++fi) {
        for (std::size_t ai = 0; ai < na; ++ai) {
          for (std::size_t k = 0; k < ns; ++k) {
            vals[k] = maximal_quotient(integral[fi * ns + k], shells[k].mass, mu_pow[ai * ns + k]);
          }
          out[fi * na + ai][c] = reduce_shells(index, c, vals, opt).value;
        }
      }
    }
  }
  return out;
}

OperatorOutput maximal(const ScalarField& f, const CubeIndex& index, double alpha,
                       const MaximalOptions& opt) {
  if (&f.domain() != &index.domain()) {
    throw std::invalid_argument("field and cube index live on different domains");
  }
  const DiscreteDomain& dom = index.domain();
  const double beta = resolve_beta(dom, opt.beta);
  check_maximal_alpha(alpha, beta);
  check_depth(opt);
  const std::size_t n = index.size();
  const double g = alpha / beta;
  std::vector<double> fm(n);
  for (std::size_t y = 0; y < n; ++y) {
    fm[y] = std::fabs(f[y]) * dom.mass(y);
  }
  std::vector<double> value(n), side(n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<double> vals;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t ci = 0; ci < nn; ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const auto order = index.order(c);
      const auto shells = index.shells(c);
      vals.resize(shells.size());
      ExactSum acc;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < shells.size(); ++k) {
        for (; pos < shells[k].end; ++pos) {
          acc.add(fm[order[pos]]);
        }
        vals[k] = maximal_quotient(acc.value(), shells[k].mass, std::pow(shells[k].mass, g));
      }
      const Reduced r = reduce_shells(index, c, vals, opt);
      value[c] = r.value;
      side[c] = r.side;
    }
  }
  return {ScalarField(f.domain_ptr(), std::move(value)), std::move(side), opt.mode};
}

OperatorOutput maximal(const ScalarField& f, double alpha, const MaximalOptions& opt) {
  const CubeIndex index(f.domain_ptr());
  return maximal(f, index, alpha, opt);
}

std::vector<std::vector<double>> fractional_integral_batch(
    const CubeIndex& index, std::span<const std::vector<double>> fields, double alpha,
    std::optional<double> beta_opt) {
  const DiscreteDomain& dom = index.domain();
  check_frint_alpha(alpha, resolve_beta(dom, beta_opt));
  const std::size_t n = index.size();
  for (const auto& f : fields) {
    check_field(f, n);
  }
  std::vector<std::vector<double>> out(fields.size(), std::vector<double>(n));
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<double> weight(n);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t ci = 0; ci < nn; ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const auto shells = index.shells(c);
      const auto x = dom.coords(c);
      for (std::size_t y = 0; y < n; ++y) {
        if (y == c) {
          weight[y] = 0.0;
          continue;
        }
        const double e = l2_distance(x, dom.coords(y));
        const double mu = shells[index.shell_at(c, e)].mass;
        weight[y] = frint_weight(e, alpha, dom.mass(y), mu);
      }
      for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        ExactSum acc;
        const auto& f = fields[fi];
        for (std::size_t y = 0; y < n; ++y) {
          if (y != c) {
            acc.add(f[y] * weight[y]);
          }
        }
        out[fi][c] = acc.value();
      }
    }
  }
  return out;
}

OperatorOutput fractional_integral(const ScalarField& f, const CubeIndex& index, double alpha,
                                   std::optional<double> beta) {
  if (&f.domain() != &index.domain()) {
    throw std::invalid_argument("field and cube index live on different domains");
  }
  const std::vector<std::vector<double>> fields{std::vector<double>(f.values().begin(),
                                                                    f.values().end())};
  auto out = fractional_integral_batch(index, fields, alpha, beta);
  return {ScalarField(f.domain_ptr(), std::move(out[0])), {}, Mode::exact};
}

OperatorOutput fractional_integral(const ScalarField& f, double alpha,
                                   std::optional<double> beta) {
  const CubeIndex index(f.domain_ptr());
  return fractional_integral(f, index, alpha, beta);
}

namespace reference {

namespace {

struct CubeSums {
  double integral;
  double mu;
};

CubeSums scan_cube(const ScalarField& f, std::span<const double> x, double half) {
  const DiscreteDomain& dom = f.domain();
  ExactSum s, m;
  for (std::size_t y = 0; y < dom.size(); ++y) {
    if (linf_distance(x, dom.coords(y)) <= half) {
      s.add(std::fabs(f[y]) * dom.mass(y));
      m.add(dom.mass(y));
    }
  }
  return {s.value(), m.value()};
}

}  // namespace

OperatorOutput maximal(const ScalarField& f, double alpha, const MaximalOptions& opt) {
  const DiscreteDomain& dom = f.domain();
  const double beta = resolve_beta(dom, opt.beta);
  check_maximal_alpha(alpha, beta);
  check_depth(opt);
  const double g = alpha / beta;
  const std::size_t n = dom.size();
  std::vector<double> value(n), arg(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto x = dom.coords(c);
    std::vector<double> sides;
    if (opt.mode == Mode::exact) {
      for (std::size_t y = 0; y < n; ++y) {
        sides.push_back(2.0 * linf_distance(x, dom.coords(y)));
      }
      std::sort(sides.begin(), sides.end());
      sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
      sides.push_back(2.0 * dom.diameter());
    } else {
      for (int k = opt.depth; k >= 0; --k) {
        sides.push_back(dyadic_side(dom.diameter(), k));
      }
    }
    double best = -1.0;
    double best_side = 0.0;
    for (const double side : sides) {
      const CubeSums cs = scan_cube(f, x, side * 0.5);
      if (cs.mu == 0.0) {
        continue;
      }
      const double v = maximal_quotient(cs.integral, cs.mu, std::pow(cs.mu, g));
      if (v > best) {
        best = v;
        best_side = side;
      }
    }
    value[c] = best;
    arg[c] = best_side;
  }
  return {ScalarField(f.domain_ptr(), std::move(value)), std::move(arg), opt.mode};
}

OperatorOutput fractional_integral(const ScalarField& f, double alpha,
                                   std::optional<double> beta) {
  const DiscreteDomain& dom = f.domain();
  check_frint_alpha(alpha, resolve_beta(dom, beta));
  const std::size_t n = dom.size();
  std::vector<double> value(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto x = dom.coords(c);
    ExactSum acc;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == c) {
        continue;
      }
      const double e = l2_distance(x, dom.coords(y));
      const double mu =
          e > 0.0 ? cube_measure(dom, Cube(Point(x.begin(), x.end()), 2.0 * e)) : dom.mass(y);
      acc.add(f[y] * frint_weight(e, alpha, dom.mass(y), mu));
    }
    value[c] = acc.value();
  }
  return {ScalarField(f.domain_ptr(), std::move(value)), {}, Mode::exact};
}

}  // namespace reference

}  // namespace varlex
