#include "varlex/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "varlex/exact_sum.hpp"

namespace varlex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(x.size()) + ", descriptor expects " +
                                std::to_string(n));
  }
}

Range range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace

std::string kind_name(const FieldExpr& e) {
  return std::visit(Overloaded{
                        [](const expr::Constant&) { return std::string("constant"); },
                        [](const expr::Power&) { return std::string("power"); },
                        [](const expr::ProductPower&) { return std::string("product_power"); },
                        [](const expr::LogPerturbed&) { return std::string("logperturb"); },
                        [](const expr::Linear&) { return std::string("linear"); },
                        [](const expr::Step&) { return std::string("step"); },
                        [](const expr::ClippedPower&) { return std::string("clipped_power"); },
                        [](const expr::ExampleWeight&) { return std::string("paper_example"); },
                        [](const expr::Table&) { return std::string("table"); },
                    },
                    e);
}

bool is_analytic(const FieldExpr& e) { return !std::holds_alternative<expr::Table>(e); }

double evaluate(const FieldExpr& e, std::span<const double> x, double distance_floor) {
  return std::visit(
      Overloaded{
          [](const expr::Constant& c) { return c.value; },
          [&](const expr::Power& p) {
            require_dim(x, p.x0.size(), "power");
            const double d = l2_distance(x, p.x0);
            if (d == 0.0 && p.eta < 0.0) {
              throw std::domain_error("power weight evaluated at its singularity");
            }
            return std::pow(d, p.eta);
          },
          [&](const expr::ProductPower& p) {
            require_dim(x, p.center.size(), "product_power");
            double v = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double d = std::fabs(x[i] - p.center[i]);
              if (d == 0.0 && p.eta[i] < 0.0) {
                throw std::domain_error("product power evaluated on a singular hyperplane");
              }
              v *= std::pow(d, p.eta[i]);
            }
            return v;
          },
          [&](const expr::LogPerturbed& l) {
            require_dim(x, l.x0.size(), "logperturb");
            const double d = l2_distance(x, l.x0);
            if (d == 0.0) {
              return l.base;
            }
            return l.base + l.amplitude / std::log(std::numbers::e + 1.0 / d);
          },
          [&](const expr::Linear& l) {
            require_dim(x, l.gradient.size(), "linear");
            double v = l.base;
            for (std::size_t i = 0; i < x.size(); ++i) {
              v += l.gradient[i] * x[i];
            }
            return v;
          },
          [&](const expr::Step& s) {
            if (s.axis >= x.size()) {
              throw std::invalid_argument("step axis exceeds point dimension");
            }
            return x[s.axis] < s.at ? s.below : s.above;
          },
          [&](const expr::ClippedPower& c) {
            double v = 1.0;
            for (const Point& s : c.singularities) {
              require_dim(x, s.size(), "clipped_power");
              double d = l2_distance(x, s);
              if (d == 0.0) {
                if (!(distance_floor > 0.0)) {
                  throw std::domain_error("clipped power evaluated at its singularity");
                }
                d = distance_floor;
              }
              v = std::max(v, std::pow(d, -c.theta));
            }
            return v;
          },
          [&](const expr::ExampleWeight& w) {
            require_dim(x, 2, "paper_example weight");
            if (x[0] > 0.0) {
              return std::pow(x[0], w.a);
            }
            const double prod = std::fabs(x[0] * x[1]);
            if (prod == 0.0 && w.a < 0.0) {
              throw std::domain_error("example weight evaluated on a singular axis");
            }
            return std::pow(prod, w.a);
          },
          [](const expr::Table&) -> double {
            throw std::invalid_argument("table fields cannot be evaluated pointwise");
          },
      },
      e);
}

ScalarField::ScalarField(DomainPtr domain, std::vector<double> values,
                         std::optional<FieldExpr> descriptor)
    : domain_(std::move(domain)), values_(std::move(values)), descriptor_(std::move(descriptor)) {
  if (!domain_) {
    throw std::invalid_argument("field needs a domain");
  }
  if (values_.size() != domain_->size()) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " values for " + std::to_string(domain_->size()) + " atoms");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("field value at atom " + std::to_string(i) + " is not finite");
    }
  }
}

ScalarField ScalarField::constant(DomainPtr domain, double c) {
  const std::size_t n = domain->size();
  return ScalarField(std::move(domain), std::vector<double>(n, c), expr::Constant{c});
}

ScalarField ScalarField::realize(DomainPtr domain, const FieldExpr& e) {
  if (const auto* table = std::get_if<expr::Table>(&e)) {
    return ScalarField(std::move(domain), table->values, e);
  }
  const double floor = 0.5 * domain->min_spacing();
  std::vector<double> v(domain->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = evaluate(e, domain->coords(i), std::isfinite(floor) ? floor : 0.0);
  }
  return ScalarField(std::move(domain), std::move(v), e);
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double epsilon_window(const ExponentSystem& sys) {
  const double a = sys.alpha;
  const double b = sys.beta;
  return std::min({a, b - a, b / sys.q_range.max,
                   b * (1.0 / sys.p_range.max - 1.0 / sys.q_range.min)});
}

ExponentSystem build_exponent_system(const ScalarField& p, double alpha,
                                     std::optional<double> beta_opt,
                                     std::optional<double> epsilon) {
  const double beta = beta_opt.value_or(p.domain().ahlfors_dim());
  if (!(beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (!(alpha >= 0.0) || !(alpha < beta)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " violates 0 <= alpha < beta = " << beta;
    throw std::invalid_argument(os.str());
  }
  const Range pr = range_of(p.values());
  if (!(pr.min > 1.0)) {
    std::ostringstream os;
    os << "p_* = " << pr.min << " violates p_* > 1";
    throw std::invalid_argument(os.str());
  }
  if (alpha > 0.0 && !(pr.max < beta / alpha)) {
    std::ostringstream os;
    os << "p^* = " << pr.max << " violates p^* < beta/alpha = " << beta / alpha;
    throw std::invalid_argument(os.str());
  }

  const auto& dom = p.domain_ptr();
  const std::size_t n = p.size();
  std::vector<double> conj(n), q(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = p[i];
    conj[i] = pi / (pi - 1.0);
    q[i] = alpha == 0.0 ? pi : 1.0 / (1.0 / pi - alpha / beta);
    s[i] = 1.0 + q[i] / conj[i];
  }
  ExponentSystem sys{
      .p = p,
      .conj = ScalarField(dom, std::move(conj)),
      .q = ScalarField(dom, std::move(q)),
      .s = ScalarField(dom, std::move(s)),
      .alpha = alpha,
      .beta = beta,
  };
  sys.p_range = pr;
  sys.q_range = range_of(sys.q.values());
  sys.s_range = range_of(sys.s.values());

  if (epsilon) {
    const double eps = *epsilon;
    const double window = epsilon_window(sys);
    if (!(eps > 0.0) || !(eps < window)) {
      std::ostringstream os;
      os << "epsilon = " << eps
         << " violates 0 < eps < min{alpha, beta-alpha, beta/q^*, beta(1/p^*-1/q_*)} = "
         << window;
      throw std::invalid_argument(os.str());
    }
    std::vector<double> qp(n), qm(n), sp(n), sm(n);
    for (std::size_t i = 0; i < n; ++i) {
      qp[i] = 1.0 / (1.0 / p[i] - (alpha + eps) / beta);
      qm[i] = 1.0 / (1.0 / p[i] - (alpha - eps) / beta);
      sp[i] = 1.0 + qp[i] / sys.conj[i];
      sm[i] = 1.0 + qm[i] / sys.conj[i];
    }
    sys.epsilon = eps;
    sys.q_plus = ScalarField(dom, std::move(qp));
    sys.q_minus = ScalarField(dom, std::move(qm));
    sys.s_plus = ScalarField(dom, std::move(sp));
    sys.s_minus = ScalarField(dom, std::move(sm));
    sys.s_plus_range = range_of(sys.s_plus->values());
    sys.s_minus_range = range_of(sys.s_minus->values());
  }
  return sys;
}

OmegaSet::OmegaSet(DomainPtr domain, std::vector<std::uint32_t> members, double r, double eps)
    : domain_(std::move(domain)),
      members_(std::move(members)),
      mask_(domain_->size(), false),
      r_(r),
      eps_(eps) {
  for (const auto m : members_) {
    if (m >= domain_->size()) {
      throw std::out_of_range("omega set member out of range");
    }
    mask_[m] = true;
  }
}

bool OmegaSet::contains(std::size_t atom) const { return atom < mask_.size() && mask_[atom]; }

double OmegaSet::measure() const {
  ExactSum acc;
  for (const auto m : members_) {
    acc.add(domain_->mass(m));
  }
  return acc.value();
}

std::vector<std::uint32_t> OmegaSet::complement() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < mask_.size(); ++i) {
    if (!mask_[i]) {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

// Distance from each atom of {t > r} to the nearest atom of {t <= r}
// (+inf when the sublevel set is empty); -1 marks atoms outside {t > r}.
std::vector<double> distance_to_sublevel(const ScalarField& t, double r) {
  const DiscreteDomain& dom = t.domain();
  std::vector<std::size_t> low;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > r)) {
      low.push_back(i);
    }
  }
  std::vector<double> dist(t.size(), -1.0);
  const auto n = static_cast<std::ptrdiff_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    if (!(t[i] > r)) {
      continue;
    }
    double d = std::numeric_limits<double>::infinity();
    for (const std::size_t y : low) {
      d = std::min(d, l2_distance(dom.coords(i), dom.coords(y)));
    }
    dist[i] = d;
  }
  return dist;
}

}  // namespace

OmegaSet omega_set(const ScalarField& t, double r, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("omega_set needs eps > 0");
  }
  const auto dist = distance_to_sublevel(t, r);
  std::vector<std::uint32_t> members;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    // Open balls: an atom at distance exactly eps survives.
    if (dist[i] >= 0.0 && dist[i] >= eps) {
      members.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return OmegaSet(t.domain_ptr(), std::move(members), r, eps);
}

double find_epsilon0(const ScalarField& t, double r) {
  const auto dist = distance_to_sublevel(t, r);
  const double reach = *std::max_element(dist.begin(), dist.end());
  if (reach < 0.0) {
    throw std::invalid_argument("superlevel set {t > r} is empty");
  }
  const double diam = t.domain().diameter();
  double eps = 0.5 * diam;
  for (int k = 1; k <= 60 && eps > 0.0; ++k, eps *= 0.5) {
    if (eps <= reach) {
      return eps;
    }
  }
  throw std::runtime_error("no dyadic epsilon keeps the truncated superlevel set nonempty; "
                           "discretization too coarse");
}

double log_holder_constant(const ScalarField& t) {
  const DiscreteDomain& dom = t.domain();
  const auto n = static_cast<std::ptrdiff_t>(t.size());
  double best = -1.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const double d = l2_distance(dom.coords(i), dom.coords(j));
      if (d > 0.0 && d <= 0.5) {
        best = std::max(best, std::fabs(t[i] - t[j]) * std::log(1.0 / d));
      }
    }
  }
  if (best < 0.0) {
    throw std::invalid_argument("no pairs within 1/2");
  }
  return best;
}

}  // namespace varlex
