#include "varlex/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "varlex/exact_sum.hpp"

namespace varlex {

namespace {

void check_same_domain(const ScalarField& f, const CubeIndex& index) {
  if (&f.domain() != &index.domain()) {
    throw std::invalid_argument("field and cube index live on different domains");
  }
}

// Runs `eval(center, shells, vals)` filling one value per shell, then takes
// the max over the sampled cubes. Per-center results are merged in atom order.
template <class Eval>
CubeConstant scan_cubes(const CubeIndex& index, const CubeSampler& sampler, Eval&& eval) {
  if (sampler.mode == Mode::dyadic && (sampler.depth < 0 || sampler.depth > 1000)) {
    throw std::invalid_argument("dyadic depth must lie in [0, 1000]");
  }
  const std::size_t n = index.size();
  const double diam = index.domain().diameter();
  std::vector<double> best(n), best_side(n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<double> vals;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t ci = 0; ci < nn; ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const auto shells = index.shells(c);
      vals.assign(shells.size(), 0.0);
      eval(c, shells, vals);
      double b = -std::numeric_limits<double>::infinity();
      double side = 0.0;
      if (sampler.mode == Mode::exact) {
        for (std::size_t k = 0; k < shells.size(); ++k) {
          if (vals[k] > b) {
            b = vals[k];
            side = 2.0 * shells[k].half_side;
          }
        }
      } else {
        for (int k = sampler.depth; k >= 0; --k) {
          const double l = diam * std::ldexp(1.0, -k);
          const std::size_t j = index.shell_at(c, l * 0.5);
          if (vals[j] > b) {
            b = vals[j];
            side = l;
          }
        }
      }
      best[c] = b;
      best_side[c] = side;
    }
  }
  CubeConstant out{best[0], 0, best_side[0]};
  for (std::size_t c = 1; c < n; ++c) {
    if (best[c] > out.value || (std::isnan(best[c]) && !std::isnan(out.value))) {
      out = {best[c], c, best_side[c]};
    }
  }
  return out;
}

void check_positive(const ScalarField& w, const char* what) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": weight must be positive (atom " +
                                  std::to_string(i) + ")");
    }
  }
}

}  // namespace

CubeConstant muckenhoupt_constant(const ScalarField& w, double s, const CubeIndex& index,
                                  const CubeSampler& sampler) {
  check_same_domain(w, index);
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw std::invalid_argument("muckenhoupt_constant needs s > 1 (use a1_constant for s = 1)");
  }
  check_positive(w, "muckenhoupt_constant");
  const DiscreteDomain& dom = index.domain();
  const double e = -1.0 / (s - 1.0);
  std::vector<double> wm(w.size()), vm(w.size());
  for (std::size_t y = 0; y < w.size(); ++y) {
    wm[y] = w[y] * dom.mass(y);
    vm[y] = std::pow(w[y], e) * dom.mass(y);
  }
  return scan_cubes(index, sampler, [&](std::size_t c, auto shells, std::vector<double>& vals) {
    const auto order = index.order(c);
    ExactSum a, b;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < shells.size(); ++k) {
      for (; pos < shells[k].end; ++pos) {
        a.add(wm[order[pos]]);
        b.add(vm[order[pos]]);
      }
      const double mu = shells[k].mass;
      vals[k] = a.value() / mu * std::pow(b.value() / mu, s - 1.0);
    }
  });
}

CubeConstant a1_constant(const ScalarField& w, const CubeIndex& index,
                         const CubeSampler& sampler) {
  check_same_domain(w, index);
  check_positive(w, "a1_constant");
  const DiscreteDomain& dom = index.domain();
  std::vector<double> wm(w.size());
  for (std::size_t y = 0; y < w.size(); ++y) {
    wm[y] = w[y] * dom.mass(y);
  }
  return scan_cubes(index, sampler, [&](std::size_t c, auto shells, std::vector<double>& vals) {
    const auto order = index.order(c);
    ExactSum a;
    double lo = std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    for (std::size_t k = 0; k < shells.size(); ++k) {
      for (; pos < shells[k].end; ++pos) {
        a.add(wm[order[pos]]);
        lo = std::min(lo, w[order[pos]]);
      }
      vals[k] = a.value() / shells[k].mass / lo;
    }
  });
}

CubeConstant measure_exponent_constant(const ScalarField& p, const CubeIndex& index,
                                       const CubeSampler& sampler) {
  check_same_domain(p, index);
  return scan_cubes(index, sampler, [&](std::size_t c, auto shells, std::vector<double>& vals) {
    const auto order = index.order(c);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    for (std::size_t k = 0; k < shells.size(); ++k) {
      for (; pos < shells[k].end; ++pos) {
        lo = std::min(lo, p[order[pos]]);
        hi = std::max(hi, p[order[pos]]);
      }
      vals[k] = std::pow(shells[k].mass, lo - hi);
    }
  });
}

ScalarField build_power_weight(DomainPtr domain, const Point& x0, double eta) {
  if (x0.size() != domain->ambient_dim()) {
    throw std::invalid_argument("power weight center has the wrong dimension");
  }
  return ScalarField::realize(std::move(domain), expr::Power{x0, eta});
}

double field_value_at(const ScalarField& f, const Point& x) {
  if (f.descriptor() && is_analytic(*f.descriptor())) {
    return evaluate(*f.descriptor(), x, 0.5 * f.domain().min_spacing());
  }
  const DiscreteDomain& dom = f.domain();
  std::size_t best = 0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const double di = l2_distance(x, dom.coords(i));
    if (di < d) {
      d = di;
      best = i;
    }
  }
  return f[best];
}

PowerWindow power_weight_window(const ExponentSystem& sys, const Point& x0, double eta) {
  const double n = static_cast<double>(sys.p.domain().ambient_dim());
  const double p0 = field_value_at(sys.p, x0);
  const double conj = p0 / (p0 - 1.0);
  const double q0 = sys.alpha == 0.0 ? p0 : 1.0 / (1.0 / p0 - sys.alpha / sys.beta);
  PowerWindow w{-n / q0, n / conj, false};
  w.admissible = eta > w.lower && eta < w.upper;
  return w;
}

ScalarField build_samko_weight(const ScalarField& w1, const ScalarField& w2,
                               const ExponentSystem& sys) {
  if (!sys.epsilon || !sys.q_minus || !sys.s_minus_range) {
    throw std::invalid_argument("samko weight needs an exponent system with epsilon set");
  }
  if (w1.size() != sys.p.size() || w2.size() != sys.p.size()) {
    throw std::invalid_argument("samko weight factors do not match the exponent domain");
  }
  check_positive(w1, "samko w1");
  check_positive(w2, "samko w2");
  const double s_low = sys.s_minus_range->min;
  std::vector<double> v(w1.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double inv_q = 1.0 / (*sys.q_minus)[i];
    v[i] = std::pow(w1[i], inv_q) * std::pow(w2[i], inv_q * (1.0 - s_low));
  }
  return ScalarField(w1.domain_ptr(), std::move(v));
}

ScalarField variable_power_weight(const ScalarField& w, const ScalarField& a) {
  if (a.size() != w.size()) {
    throw std::invalid_argument("weight and exponent sizes differ");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 1.0)) {
      throw std::invalid_argument("variable power weight needs w >= 1 (atom " +
                                  std::to_string(i) + ")");
    }
    if (!(a[i] >= 1.0)) {
      throw std::invalid_argument("variable power weight needs a >= 1 (atom " +
                                  std::to_string(i) + ")");
    }
  }
  return pointwise_power(w, a);
}

ScalarField pointwise_power(const ScalarField& w, const ScalarField& e) {
  if (e.size() != w.size()) {
    throw std::invalid_argument("weight and exponent sizes differ");
  }
  check_positive(w, "pointwise_power");
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::pow(w[i], e[i]);
  }
  return ScalarField(w.domain_ptr(), std::move(v));
}

ScalarField pointwise_power(const ScalarField& w, double e) {
  return pointwise_power(w, ScalarField::constant(w.domain_ptr(), e));
}

ScalarField realize_weight(const DomainPtr& domain, const WeightSpec& spec,
                           const ExponentSystem* sys) {
  ScalarField w = ScalarField::realize(domain, spec.w);
  if (!spec.samko_w2) {
    return w;
  }
  if (sys == nullptr) {
    throw std::invalid_argument("samko composite weight needs an exponent system");
  }
  return build_samko_weight(w, ScalarField::realize(domain, *spec.samko_w2), *sys);
}

}  // namespace varlex
