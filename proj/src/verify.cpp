#include "varlex/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "varlex/exact_sum.hpp"
#include "varlex/io.hpp"
#include "varlex/space.hpp"

namespace varlex {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::unstable:
      return "unstable";
    case Verdict::violated:
      return "violated";
    case Verdict::preconditions_not_met:
      return "preconditions_not_met";
  }
  return "unknown";
}

const std::vector<std::string>& verifier_ids() {
  static const std::vector<std::string> ids{"rara",    "acotacion", "global", "coro1",
                                            "ialfa",   "samko",     "reverse", "tres",
                                            "cinco",   "factorization", "welland"};
  return ids;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

expr::Linear linear_x1(double base, double slope, std::size_t dim) {
  std::vector<double> g(dim, 0.0);
  g[0] = slope;
  return {base, g};
}

}  // namespace

RunConfig default_config(const std::string& id) {
  RunConfig c;
  c.id = id;
  c.resolutions = {16, 32, 64};
  const Point mid{0.5, 0.5};
  if (id == "factorization") {
    c.domain.builder = "mixed";
    c.resolutions = {4, 5, 6, 7, 8};
    c.trials = 200;
  } else if (id == "welland") {
    c.alpha = 1.0;
    c.epsilon = 0.25;
    c.trials = 100;
  } else if (id == "tres") {
    c.exponent = expr::LogPerturbed{2.0, 1.0, mid};
    c.trials = 0;
  } else if (id == "cinco") {
    c.exponent = linear_x1(0.5, 1.5, 2);
    c.epsilon = 0.1;
  } else if (id == "rara" || id == "acotacion" || id == "global") {
    c.exponent = linear_x1(1.8, 0.4, 2);
    c.alpha = 0.5;
    c.r = 3.0;
    c.epsilon = 0.1;
    c.weight = {expr::Power{mid, 0.25}, std::nullopt};
  } else if (id == "coro1") {
    c.exponent = linear_x1(1.8, 0.4, 2);
    c.alpha = 0.5;
    c.x0 = mid;
    c.weight = {expr::Power{mid, -0.25}, std::nullopt};
  } else if (id == "ialfa") {
    c.exponent = linear_x1(1.8, 0.4, 2);
    c.alpha = 0.5;
    c.epsilon = 0.1;
    c.weight = {expr::Power{mid, 0.25}, std::nullopt};
  } else if (id == "samko") {
    c.exponent = expr::Constant{2.0};
    c.alpha = 0.5;
    c.epsilon = 0.1;
    c.weight = {expr::ClippedPower{{Point{0.25, 0.25}}, 0.5},
                expr::ClippedPower{{Point{0.75, 0.75}}, 0.5}};
  } else if (id == "reverse") {
    c.domain.dim = 1;
    c.domain.lo = {0.0};
    c.domain.hi = {1.0};
    c.resolutions = {64, 128, 256};
    c.x0 = {0.0};
    c.weight = {expr::ClippedPower{{Point{0.0}}, 0.25}, std::nullopt};
    c.delta_steps = 11;
    c.trials = 0;
  } else {
    throw std::invalid_argument("unknown verifier id '" + id + "'");
  }
  materialize(c);
  return c;
}

DomainPtr build_domain(const DomainSpec& spec, std::size_t resolution) {
  if (spec.builder == "lebesgue_grid") {
    return std::make_shared<const DiscreteDomain>(build_lebesgue_grid(
        spec.dim, spec.lo, spec.hi, std::vector<std::size_t>(spec.dim, resolution)));
  }
  if (spec.builder == "paper_example") {
    return std::make_shared<const DiscreteDomain>(build_example_domain(resolution));
  }
  if (spec.builder == "file") {
    return std::make_shared<const DiscreteDomain>(load_domain_file(spec.path));
  }
  throw std::invalid_argument("unknown domain builder '" + spec.builder + "'");
}

void materialize(RunConfig& c) {
  const auto& ids = verifier_ids();
  if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) {
    throw std::invalid_argument("unknown verifier id '" + c.id + "'");
  }
  const std::string& b = c.domain.builder;
  if (b != "lebesgue_grid" && b != "paper_example" && b != "file" && b != "mixed") {
    throw std::invalid_argument("domain.builder must be lebesgue_grid, paper_example, file or mixed");
  }
  if (b == "mixed" && c.id != "factorization") {
    throw std::invalid_argument("domain.builder 'mixed' is only available to factorization");
  }
  if (b == "lebesgue_grid" &&
      (c.domain.dim == 0 || c.domain.lo.size() != c.domain.dim ||
       c.domain.hi.size() != c.domain.dim)) {
    throw std::invalid_argument("domain.lo and domain.hi must have domain.dim entries");
  }
  if (b == "paper_example") {
    c.domain.dim = 2;
  }
  if (b == "file") {
    if (c.domain.path.empty()) {
      throw std::invalid_argument("domain.path is required for the file builder");
    }
    c.resolutions.clear();
  } else {
    if (c.resolutions.empty()) {
      throw std::invalid_argument("resolutions must be nonempty");
    }
    for (const auto r : c.resolutions) {
      if (r < 2) {
        throw std::invalid_argument("every resolution must be at least 2");
      }
    }
    if (!is_analytic(c.exponent) || !is_analytic(c.weight.w) ||
        (c.weight.samko_w2 && !is_analytic(*c.weight.samko_w2))) {
      throw std::invalid_argument(
          "table fields cannot be resampled on builder domains; use a file domain");
    }
  }
  if (!c.beta) {
    if (b == "lebesgue_grid") {
      c.beta = static_cast<double>(c.domain.dim);
    } else if (b == "file") {
      c.beta = load_domain_file(c.domain.path).ahlfors_dim();
    } else {
      c.beta = 2.0;
    }
  }
  if (!(*c.beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (!(c.stability >= 1.0)) {
    throw std::invalid_argument("stability must be >= 1");
  }
  if (!(c.tolerance >= 0.0) || !(c.norm_tolerance > 0.0)) {
    throw std::invalid_argument("tolerances must be nonnegative (norm_tolerance positive)");
  }
  if (c.mode == Mode::dyadic || c.sampler.mode == Mode::dyadic) {
    if (c.depth < 0 || c.sampler.depth < 0) {
      throw std::invalid_argument("depth must be nonnegative");
    }
  }
  const bool randomized = c.id != "tres" && c.id != "reverse";
  if (randomized && c.trials == 0) {
    throw std::invalid_argument("trials must be positive");
  }
  if (c.x0.size() != c.domain.dim && b != "file") {
    throw std::invalid_argument("x0 must have domain.dim entries");
  }
}

bool is_stable(const std::vector<std::pair<std::size_t, double>>& trend, double factor) {
  if (trend.empty()) {
    return false;
  }
  for (const auto& [res, v] : trend) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  const double first = trend.front().second;
  const double last = trend.back().second;
  if (first == 0.0) {
    return last == 0.0;
  }
  return last / first <= factor;
}

bool log_holder_diverges(const std::vector<std::pair<std::size_t, double>>& estimate,
                         const std::vector<std::pair<std::size_t, double>>& oscillation) {
  for (const auto& [res, v] : estimate) {
    if (!std::isfinite(v)) {
      return true;
    }
  }
  if (estimate.size() < 2 || oscillation.size() != estimate.size()) {
    return false;
  }
  const double osc0 = oscillation.front().second;
  const double osc1 = oscillation.back().second;
  return estimate.back().second > estimate.front().second && osc1 > 0.0 && osc1 >= 0.9 * osc0;
}

std::vector<double> oscillation_bias(const CubeIndex& index,
                                     std::span<const std::vector<double>> fields) {
  const std::size_t n = index.size();
  std::vector<double> bias(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto shells = index.shells(c);
    if (shells.size() < 2) {
      continue;
    }
    const auto order = index.order(c);
    double best = 0.0;
    for (std::size_t k = shells[0].end; k < shells[1].end; ++k) {
      const std::size_t y = order[k];
      double d = 0.0;
      for (const auto& f : fields) {
        d += std::fabs(f[c] - f[y]);
      }
      best = std::max(best, d);
    }
    bias[c] = std::isfinite(best) ? best : 0.0;
  }
  return bias;
}

RandomFunction random_function(const DiscreteDomain& domain, Rng& rng,
                               std::span<const double> bias,
                               std::span<const std::uint32_t> support) {
  const std::size_t n = domain.size();
  std::vector<std::uint32_t> cand;
  if (support.empty()) {
    cand.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cand[i] = static_cast<std::uint32_t>(i);
    }
  } else {
    cand.assign(support.begin(), support.end());
  }
  std::vector<double> cum;
  double total = 0.0;
  if (bias.size() == n) {
    cum.reserve(cand.size());
    for (const auto i : cand) {
      total += bias[i];
      cum.push_back(total);
    }
  }
  auto pick = [&]() -> std::size_t {
    if (total > 0.0 && rng.bernoulli(0.5)) {
      const double u = rng.uniform() * total;
      const auto it = std::upper_bound(cum.begin(), cum.end(), u);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                           cand.size() - 1);
      return cand[k];
    }
    return cand[rng.index(cand.size())];
  };

  RandomFunction out;
  out.values.assign(n, 0.0);
  auto add_spikes = [&]() {
    const std::size_t k = 1 + rng.index(3);
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t a = pick();
      out.values[a] += rng.pareto(1.5);
    }
    return k;
  };
  auto add_bump = [&](double scale) {
    const std::size_t c = cand[rng.index(cand.size())];
    const double sigma = domain.diameter() * (0.02 + 0.3 * rng.uniform());
    for (const auto i : cand) {
      const double d = l2_distance(domain.coords(i), domain.coords(c));
      out.values[i] += scale * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return sigma;
  };
  auto add_heavy = [&](double scale) {
    for (const auto i : cand) {
      if (rng.bernoulli(0.7)) {
        out.values[i] += scale * rng.pareto(1.5);
      }
    }
  };

  switch (rng.index(4)) {
    case 0:
      out.descriptor = "spikes:" + std::to_string(add_spikes());
      break;
    case 1:
      out.descriptor = "bump:sigma=" + fmt(add_bump(1.0));
      break;
    case 2:
      add_heavy(1.0);
      out.descriptor = "heavy";
      break;
    default: {
      const std::size_t k = add_spikes();
      const double sigma = add_bump(1.0);
      add_heavy(0.1);
      out.descriptor = "mixture:spikes=" + std::to_string(k) + ",sigma=" + fmt(sigma);
      break;
    }
  }
  bool any = false;
  for (const auto i : cand) {
    any = any || out.values[i] > 0.0;
  }
  if (!any) {
    out.values[cand[rng.index(cand.size())]] = 1.0;
  }
  return out;
}

PointwiseResult factorization_check(const ExponentSystem& sys, const ScalarField& f,
                                    const ScalarField& w, const CubeIndex& index,
                                    double tolerance) {
  const DiscreteDomain& dom = index.domain();
  const std::size_t n = dom.size();
  const double ab = sys.alpha / sys.beta;
  std::vector<double> fw(n), g(n);
  ExactSum rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double af = std::fabs(f[i]);
    fw[i] = af / w[i];
    g[i] = std::pow(af, sys.p[i] / sys.s[i]) * std::pow(w[i], -sys.q[i] / sys.s[i]);
    rho.add(std::pow(af, sys.p[i]) * dom.mass(i));
  }
  const double tail = std::pow(rho.value(), ab);
  const std::vector<std::vector<double>> fields{fw, g};
  const std::vector<double> a1{sys.alpha};
  const std::vector<double> a0{0.0};
  MaximalOptions opt;
  opt.beta = sys.beta;
  const auto lhs = maximal_batch(index, std::span(fields).first(1), a1, opt)[0];
  const auto mg = maximal_batch(index, std::span(fields).subspan(1), a0, opt)[0];
  PointwiseResult res;
  for (std::size_t i = 0; i < n; ++i) {
    const double rhs = std::pow(mg[i], sys.s[i] / sys.q[i]) * tail;
    double ratio;
    if (rhs > 0.0) {
      ratio = lhs[i] / rhs;
    } else {
      ratio = lhs[i] > 0.0 ? kInf : 0.0;
    }
    if (lhs[i] > rhs * (1.0 + tolerance)) {
      res.violated = true;
    }
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.atom = i;
    }
  }
  return res;
}

namespace {

PointwiseResult welland_from(std::span<const double> iaf, std::span<const double> mp,
                             std::span<const double> mm) {
  PointwiseResult res;
  for (std::size_t i = 0; i < iaf.size(); ++i) {
    const double num = std::fabs(iaf[i]);
    const double den = std::sqrt(mp[i] * mm[i]);
    double ratio;
    if (den > 0.0) {
      ratio = num / den;
    } else if (num > 0.0) {
      ratio = kInf;
      res.violated = true;
    } else {
      continue;
    }
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.atom = i;
    }
  }
  return res;
}

void check_welland_window(double alpha, double eps, double beta) {
  if (!(alpha > 0.0) || !(alpha < beta)) {
    throw std::invalid_argument("welland needs 0 < alpha < beta");
  }
  if (!(eps > 0.0) || !(eps < std::min(alpha, beta - alpha))) {
    throw std::invalid_argument("welland needs 0 < epsilon < min{alpha, beta - alpha} = " +
                                fmt(std::min(alpha, beta - alpha)));
  }
}

}  // namespace

PointwiseResult welland_check(const ScalarField& f, double alpha, double epsilon,
                              const CubeIndex& index, std::optional<double> beta) {
  const double b = beta.value_or(index.domain().ahlfors_dim());
  check_welland_window(alpha, epsilon, b);
  const std::vector<std::vector<double>> fields{
      std::vector<double>(f.values().begin(), f.values().end())};
  const std::vector<double> alphas{alpha + epsilon, alpha - epsilon};
  MaximalOptions opt;
  opt.beta = b;
  const auto m = maximal_batch(index, fields, alphas, opt);
  const auto i = fractional_integral_batch(index, fields, alpha, b);
  return welland_from(i[0], m[0], m[1]);
}

PointwiseResult pointwise_maximal_check(const ScalarField& t, const ScalarField& f,
                                        const OmegaSet& omega, const CubeIndex& index) {
  const std::size_t n = index.size();
  std::vector<double> ft(n);
  for (std::size_t i = 0; i < n; ++i) {
    ft[i] = std::pow(std::fabs(f[i]), t[i]);
  }
  const std::vector<std::vector<double>> fields{
      std::vector<double>(f.values().begin(), f.values().end()), ft};
  const std::vector<double> a0{0.0};
  const auto m = maximal_batch(index, fields, a0);
  PointwiseResult res;
  for (const auto x : omega.members()) {
    const double ratio = std::pow(m[0][x], t[x]) / (1.0 + m[1][x]);
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.atom = x;
    }
  }
  return res;
}

namespace {

struct Level {
  std::size_t res = 0;
  DomainPtr dom;
  std::shared_ptr<const CubeIndex> index;
};

// Cube indices are the expensive part of a level; keep the most recent few.
Level make_level(const DomainSpec& spec, std::size_t res) {
  static std::mutex mu;
  static std::vector<std::pair<std::string, Level>> cache;
  std::string key = spec.builder + "|" + std::to_string(spec.dim) + "|" + spec.path + "|" +
                    std::to_string(res);
  for (const double v : spec.lo) {
    key += "|" + fmt(v);
  }
  for (const double v : spec.hi) {
    key += "|" + fmt(v);
  }
  {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [k, lvl] : cache) {
      if (k == key) {
        return lvl;
      }
    }
  }
  Level lvl;
  lvl.dom = build_domain(spec, res);
  lvl.res = spec.builder == "file" ? lvl.dom->size() : res;
  lvl.index = std::make_shared<const CubeIndex>(lvl.dom);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace_back(key, lvl);
  if (cache.size() > 3) {
    cache.erase(cache.begin());
  }
  return lvl;
}

std::vector<Level> make_levels(const RunConfig& cfg) {
  std::vector<Level> out;
  if (cfg.domain.builder == "file") {
    out.push_back(make_level(cfg.domain, 0));
  } else {
    for (const auto r : cfg.resolutions) {
      out.push_back(make_level(cfg.domain, r));
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> as_vector(const ScalarField& f) {
  return {f.values().begin(), f.values().end()};
}

double ahlfors_from_index(const CubeIndex& idx) {
  const DiscreteDomain& dom = idx.domain();
  const auto radii = dyadic_radii(dom);
  const double beta = dom.ahlfors_dim();
  double c = kInf;
  for (std::size_t x = 0; x < idx.size(); ++x) {
    const auto shells = idx.shells(x);
    for (const double l : radii) {
      c = std::min(c, shells[idx.shell_at(x, l * 0.5)].mass / std::pow(l, beta));
    }
  }
  return c;
}

HypothesisCheck ahlfors_check(const std::vector<Level>& levels) {
  HypothesisCheck h{"lower Ahlfors regularity", true, true, {}, ""};
  for (const auto& l : levels) {
    const double c = ahlfors_from_index(*l.index);
    h.trend.emplace_back(l.res, c);
    h.ok = h.ok && c > 0.0;
  }
  if (h.ok && h.trend.size() >= 2 && std::isfinite(h.trend.front().second)) {
    h.ok = h.trend.back().second >= 0.5 * h.trend.front().second;
  }
  h.detail = "c_hat > 0 and retained within factor 0.5 under refinement";
  return h;
}

HypothesisCheck log_holder_check(const std::string& name, const std::vector<ScalarField>& fields,
                                 const std::vector<Level>& levels) {
  HypothesisCheck h{name + " log-Holder", true, false, {}, ""};
  try {
    std::vector<std::pair<std::size_t, double>> osc;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      h.trend.emplace_back(levels[k].res, log_holder_constant(fields[k]));
      const std::vector<std::vector<double>> one{as_vector(fields[k])};
      const auto b = oscillation_bias(*levels[k].index, one);
      osc.emplace_back(levels[k].res, *std::max_element(b.begin(), b.end()));
    }
    h.ok = !log_holder_diverges(h.trend, osc);
    h.detail = h.ok ? "estimate settles under refinement"
                    : "estimate grows while the oscillation between neighbouring atoms stays at " +
                          fmt(osc.back().second);
  } catch (const std::exception& e) {
    h.ok = true;
    h.detail = std::string("not evaluated: ") + e.what();
  }
  return h;
}

Verdict trend_verdict(const VerificationReport& r, double factor) {
  for (const auto& h : r.hypotheses) {
    if (h.gating && !h.ok) {
      return Verdict::preconditions_not_met;
    }
  }
  return is_stable(r.trend, factor) ? Verdict::pass : Verdict::unstable;
}

void finish(VerificationReport& r) {
  r.max_ratio = 0.0;
  bool first = true;
  for (const auto& [res, c] : r.trend) {
    if (first || c > r.max_ratio || (std::isnan(c) && !std::isnan(r.max_ratio))) {
      r.max_ratio = c;
    }
    first = false;
  }
}

struct LevelResult {
  double c = 0.0;
  Witness witness;
};

void merge(LevelResult& best, double ratio, const Witness& w) {
  if (ratio > best.c || (std::isnan(ratio) && !std::isnan(best.c))) {
    best.c = ratio;
    best.witness = w;
    best.witness.ratio = ratio;
  }
}

void take_witness(VerificationReport& r, const LevelResult& lr, bool first) {
  if (first || lr.c > r.witness.ratio) {
    r.witness = lr.witness;
  }
}

std::vector<double> log_values(const ScalarField& w) {
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::log(w[i]);
  }
  return v;
}

// sup over random f of ||w T f||_{q, num_set} / ||w f||_{p, den_set}, where T is
// M_alpha or I_alpha.
struct RatioJob {
  const Level* level;
  const ExponentSystem* sys;
  const ScalarField* w;
  bool frint = false;
  std::optional<std::vector<std::uint32_t>> num_set;
  std::optional<std::vector<std::uint32_t>> den_set;
  std::vector<std::uint32_t> support;
};

LevelResult norm_ratio_level(const RatioJob& job, const RunConfig& cfg, std::uint64_t seed) {
  const Level& lvl = *job.level;
  const DiscreteDomain& dom = *lvl.dom;
  const std::size_t n = dom.size();
  const ExponentSystem& sys = *job.sys;
  const ScalarField& w = *job.w;

  const std::vector<std::vector<double>> bias_fields{as_vector(sys.p), log_values(w)};
  const auto bias = oscillation_bias(*lvl.index, bias_fields);
  std::vector<std::vector<double>> fs(cfg.trials);
  std::vector<std::string> desc(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(derive_seed(seed, lvl.res, t));
    auto rf = random_function(dom, rng, bias, job.support);
    fs[t] = std::move(rf.values);
    desc[t] = std::move(rf.descriptor);
  }
  std::vector<std::vector<double>> tf;
  if (job.frint) {
    tf = fractional_integral_batch(*lvl.index, fs, sys.alpha, sys.beta);
  } else {
    MaximalOptions opt{cfg.mode, cfg.depth, sys.beta};
    const std::vector<double> alphas{sys.alpha};
    tf = maximal_batch(*lvl.index, fs, alphas, opt);
  }

  Subset num_subset = std::nullopt;
  Subset den_subset = std::nullopt;
  if (job.num_set) {
    num_subset = std::span<const std::uint32_t>(*job.num_set);
  }
  if (job.den_set) {
    den_subset = std::span<const std::uint32_t>(*job.den_set);
  }
  std::vector<double> ratio(cfg.trials);
  std::vector<std::size_t> peak(cfg.trials);
  const auto nt = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel
  {
    std::vector<double> num(n), den(n);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t ti = 0; ti < nt; ++ti) {
      const auto t = static_cast<std::size_t>(ti);
      for (std::size_t i = 0; i < n; ++i) {
        num[i] = w[i] * std::fabs(tf[t][i]);
        den[i] = w[i] * fs[t][i];
      }
      const double a =
          luxemburg_norm(num, sys.q.values(), dom, num_subset, cfg.norm_tolerance).value;
      const double b =
          luxemburg_norm(den, sys.p.values(), dom, den_subset, cfg.norm_tolerance).value;
      ratio[t] = b > 0.0 ? a / b : (a > 0.0 ? kInf : 0.0);
      std::size_t arg = 0;
      double best = -1.0;
      auto visit = [&](std::size_t i) {
        if (num[i] > best) {
          best = num[i];
          arg = i;
        }
      };
      if (job.num_set) {
        for (const auto i : *job.num_set) {
          visit(i);
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          visit(i);
        }
      }
      peak[t] = arg;
    }
  }
  LevelResult lr;
  lr.c = -1.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    merge(lr, ratio[t], Witness{lvl.res, t, peak[t], desc[t], ratio[t]});
  }
  return lr;
}

// Finite and refinement-stable Muckenhoupt constants of w_k^{e_k} in A_{s_k},
// one (field, s) per level.
struct AsCase {
  std::vector<ScalarField> weight;
  std::vector<double> s;
};

HypothesisCheck as_check(const std::string& name, const AsCase& c,
                         const std::vector<Level>& levels, const RunConfig& cfg) {
  HypothesisCheck h{name, true, true, {}, ""};
  for (std::size_t k = 0; k < levels.size(); ++k) {
    double v;
    if (!(c.s[k] > 1.0)) {
      v = kInf;
    } else {
      v = muckenhoupt_constant(c.weight[k], c.s[k], *levels[k].index, cfg.sampler).value;
    }
    h.trend.emplace_back(levels[k].res, v);
  }
  h.ok = is_stable(h.trend, cfg.stability);
  return h;
}

// Tries delta = (top - 1) 2^-k, k = 1..steps, for w^q in A_{top - delta};
// keeps the first stable one.
HypothesisCheck delta_ladder_check(const std::string& name, const std::vector<ScalarField>& wq,
                                   const std::vector<double>& top,
                                   const std::vector<Level>& levels, const RunConfig& cfg) {
  HypothesisCheck last;
  for (std::size_t k = 1; k <= cfg.delta_steps; ++k) {
    AsCase c{wq, {}};
    double delta_show = 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const double delta = (top[l] - 1.0) * std::ldexp(1.0, -static_cast<int>(k));
      c.s.push_back(top[l] - delta);
      delta_show = delta;
    }
    last = as_check(name, c, levels, cfg);
    last.detail = "delta=" + fmt(delta_show) + " (ladder step " + std::to_string(k) + ")";
    if (last.ok) {
      return last;
    }
  }
  if (cfg.delta_steps == 0) {
    last = HypothesisCheck{name, false, true, {}, "empty delta ladder"};
  } else {
    last.detail += "; no delta on the ladder gives a stable estimate";
  }
  return last;
}

VerificationReport verify_norm_family(const RunConfig& cfg, std::uint64_t seed) {
  const std::string& id = cfg.id;
  VerificationReport rep{id, seed, cfg.trials};
  const auto levels = make_levels(cfg);
  const bool frint = id == "ialfa" || id == "samko";

  std::vector<ScalarField> ps, ws, wq;
  std::vector<ExponentSystem> systems;
  for (const auto& l : levels) {
    ps.push_back(ScalarField::realize(l.dom, cfg.exponent));
    systems.push_back(build_exponent_system(ps.back(), cfg.alpha, cfg.beta,
                                            frint ? cfg.epsilon : std::nullopt));
    ws.push_back(realize_weight(l.dom, cfg.weight, &systems.back()));
    wq.push_back(pointwise_power(ws.back(), systems.back().q));
  }

  rep.hypotheses.push_back(ahlfors_check(levels));
  rep.hypotheses.push_back(log_holder_check("p", ps, levels));

  std::vector<RatioJob> jobs(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    jobs[k].level = &levels[k];
    jobs[k].sys = &systems[k];
    jobs[k].w = &ws[k];
    jobs[k].frint = frint;
  }

  if (id == "rara" || id == "acotacion") {
    HypothesisCheck range{"r in (1, s^*)", true, true, {}, "r=" + fmt(cfg.r)};
    HypothesisCheck nonempty{"Omega_{r,eps}^s nonempty", true, true, {}, ""};
    HypothesisCheck eps_ok{"eps <= eps0", true, true, {}, "eps=" + fmt(cfg.epsilon.value_or(0))};
    HypothesisCheck integrable{"sum of w^(-p') off Omega_{r,eps0}^s", true, true, {}, ""};
    if (!cfg.epsilon || !(*cfg.epsilon > 0.0)) {
      throw std::invalid_argument(id + " needs epsilon > 0");
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const auto& sys = systems[k];
      range.trend.emplace_back(levels[k].res, sys.s_range.max);
      range.ok = range.ok && cfg.r > 1.0 && cfg.r < sys.s_range.max;
      double eps0 = 0.0;
      try {
        eps0 = find_epsilon0(sys.s, cfg.r);
      } catch (const std::exception&) {
        eps0 = 0.0;
      }
      eps_ok.trend.emplace_back(levels[k].res, eps0);
      eps_ok.ok = eps_ok.ok && eps0 > 0.0 && *cfg.epsilon <= eps0;
      const OmegaSet om = omega_set(sys.s, cfg.r, *cfg.epsilon);
      nonempty.trend.emplace_back(levels[k].res, static_cast<double>(om.size()));
      nonempty.ok = nonempty.ok && !om.empty();
      jobs[k].num_set = std::vector<std::uint32_t>(om.members().begin(), om.members().end());
      if (id == "acotacion") {
        jobs[k].den_set = jobs[k].num_set;
        jobs[k].support = *jobs[k].num_set;
      } else if (eps0 > 0.0) {
        const OmegaSet om0 = omega_set(sys.s, cfg.r, eps0);
        ExactSum acc;
        for (const auto i : om0.complement()) {
          acc.add(std::pow(ws[k][i], -sys.conj[i]) * levels[k].dom->mass(i));
        }
        integrable.trend.emplace_back(levels[k].res, acc.value());
      } else {
        integrable.trend.emplace_back(levels[k].res, kInf);
      }
    }
    rep.hypotheses.push_back(range);
    rep.hypotheses.push_back(nonempty);
    rep.hypotheses.push_back(eps_ok);
    if (id == "rara") {
      integrable.ok = is_stable(integrable.trend, cfg.stability);
      rep.hypotheses.push_back(integrable);
    }
    std::vector<double> top(levels.size(), cfg.r);
    rep.hypotheses.push_back(delta_ladder_check("w^q in A_{r-delta}", wq, top, levels, cfg));
    if (!nonempty.ok) {
      rep.verdict = Verdict::preconditions_not_met;
      finish(rep);
      return rep;
    }
  } else if (id == "global") {
    std::vector<double> top;
    HypothesisCheck whole{"Omega_{s_*-delta,eps}^s equals Omega", true, false, {}, ""};
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double s_low = systems[k].s_range.min;
      top.push_back(s_low);
      if (cfg.epsilon && s_low > 1.0) {
        const OmegaSet om = omega_set(systems[k].s, s_low - 0.5 * (s_low - 1.0), *cfg.epsilon);
        whole.ok = whole.ok && om.size() == levels[k].dom->size();
        whole.trend.emplace_back(levels[k].res, static_cast<double>(om.size()));
      }
    }
    rep.hypotheses.push_back(whole);
    rep.hypotheses.push_back(delta_ladder_check("w^q in A_{s_*-delta}", wq, top, levels, cfg));
  } else if (id == "coro1") {
    HypothesisCheck lebesgue{"Lebesgue measure with beta = n", true, true, {}, ""};
    lebesgue.ok = cfg.domain.builder == "lebesgue_grid" &&
                  *cfg.beta == static_cast<double>(cfg.domain.dim);
    rep.hypotheses.push_back(lebesgue);
    const auto* pw = std::get_if<expr::Power>(&cfg.weight.w);
    HypothesisCheck window{"eta in (-n/q(x0), n/p'(x0))", false, true, {}, ""};
    if (pw == nullptr || cfg.weight.samko_w2) {
      window.detail = "weight is not a power weight";
    } else {
      const PowerWindow pwin = power_weight_window(systems.front(), pw->x0, pw->eta);
      window.ok = pwin.admissible;
      window.detail = "eta=" + fmt(pw->eta) + " window=(" + fmt(pwin.lower) + ", " +
                      fmt(pwin.upper) + ")";
    }
    rep.hypotheses.push_back(window);
  } else if (frint) {
    if (id == "samko") {
      const auto* c1 = std::get_if<expr::ClippedPower>(&cfg.weight.w);
      if (!cfg.weight.samko_w2) {
        throw std::invalid_argument("samko needs a composite weight (w1, w2)");
      }
      std::vector<ScalarField> w1, w2;
      for (const auto& l : levels) {
        w1.push_back(ScalarField::realize(l.dom, cfg.weight.w));
        w2.push_back(ScalarField::realize(l.dom, *cfg.weight.samko_w2));
      }
      for (int which = 0; which < 2; ++which) {
        const auto& wf = which == 0 ? w1 : w2;
        HypothesisCheck a1{which == 0 ? "w1 in A_1 with w1 >= 1" : "w2 in A_1 with w2 >= 1", true,
                           true, {}, ""};
        bool ge1 = true;
        for (std::size_t k = 0; k < levels.size(); ++k) {
          ge1 = ge1 && wf[k].min() >= 1.0;
          a1.trend.emplace_back(levels[k].res,
                                a1_constant(wf[k], *levels[k].index, cfg.sampler).value);
        }
        a1.ok = ge1 && is_stable(a1.trend, cfg.stability);
        a1.detail = ge1 ? "" : "weight drops below 1";
        rep.hypotheses.push_back(a1);
      }
      (void)c1;
    }
    AsCase plus, minus;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      plus.weight.push_back(pointwise_power(ws[k], *systems[k].q_plus));
      plus.s.push_back(systems[k].s_plus_range->min);
      minus.weight.push_back(pointwise_power(ws[k], *systems[k].q_minus));
      minus.s.push_back(systems[k].s_minus_range->min);
    }
    auto hp = as_check("w^{q_eps^+} in A_{(s_eps^+)_*}", plus, levels, cfg);
    auto hm = as_check("w^{q_eps^-} in A_{(s_eps^-)_*}", minus, levels, cfg);
    if (id == "samko") {
      hp.gating = false;
      hm.gating = false;
    }
    rep.hypotheses.push_back(hp);
    rep.hypotheses.push_back(hm);
  }

  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const LevelResult lr = norm_ratio_level(jobs[k], cfg, seed);
    rep.trend.emplace_back(levels[k].res, lr.c);
    rep.runtime_s.push_back(seconds_since(t0));
    take_witness(rep, lr, k == 0);
  }
  finish(rep);
  rep.verdict = trend_verdict(rep, cfg.stability);
  return rep;
}

VerificationReport verify_welland(const RunConfig& cfg, std::uint64_t seed) {
  VerificationReport rep{cfg.id, seed, cfg.trials};
  if (!cfg.epsilon) {
    throw std::invalid_argument("welland needs epsilon");
  }
  const double eps = *cfg.epsilon;
  check_welland_window(cfg.alpha, eps, *cfg.beta);
  const auto levels = make_levels(cfg);
  bool violated = false;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const Level& lvl = levels[k];
    std::vector<std::vector<double>> fs(cfg.trials);
    std::vector<std::string> desc(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      Rng rng(derive_seed(seed, lvl.res, t));
      auto rf = random_function(*lvl.dom, rng);
      fs[t] = std::move(rf.values);
      desc[t] = std::move(rf.descriptor);
    }
    const std::vector<double> alphas{cfg.alpha + eps, cfg.alpha - eps};
    MaximalOptions opt{cfg.mode, cfg.depth, cfg.beta};
    const auto m = maximal_batch(*lvl.index, fs, alphas, opt);
    const auto ia = fractional_integral_batch(*lvl.index, fs, cfg.alpha, cfg.beta);
    LevelResult lr;
    lr.c = -1.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto pr = welland_from(ia[t], m[2 * t], m[2 * t + 1]);
      violated = violated || pr.violated;
      merge(lr, pr.max_ratio, Witness{lvl.res, t, pr.atom, desc[t], pr.max_ratio});
    }
    rep.trend.emplace_back(lvl.res, lr.c);
    rep.runtime_s.push_back(seconds_since(t0));
    take_witness(rep, lr, k == 0);
  }
  finish(rep);
  rep.verdict = violated ? Verdict::violated : trend_verdict(rep, cfg.stability);
  return rep;
}

VerificationReport verify_tres(const RunConfig& cfg, std::uint64_t seed) {
  VerificationReport rep{cfg.id, seed, 0};
  const auto levels = make_levels(cfg);
  std::vector<ScalarField> ps;
  for (const auto& l : levels) {
    ps.push_back(ScalarField::realize(l.dom, cfg.exponent));
  }
  rep.hypotheses.push_back(ahlfors_check(levels));
  rep.hypotheses.push_back(log_holder_check("p", ps, levels));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const CubeConstant cc = measure_exponent_constant(ps[k], *levels[k].index, cfg.sampler);
    rep.trend.emplace_back(levels[k].res, cc.value);
    rep.runtime_s.push_back(seconds_since(t0));
    LevelResult lr{cc.value, Witness{levels[k].res, 0, cc.center, "cube side=" + fmt(cc.side),
                                     cc.value}};
    take_witness(rep, lr, k == 0);
  }
  finish(rep);
  rep.verdict = trend_verdict(rep, cfg.stability);
  return rep;
}

VerificationReport verify_cinco(const RunConfig& cfg, std::uint64_t seed) {
  VerificationReport rep{cfg.id, seed, cfg.trials};
  if (!cfg.epsilon || !(*cfg.epsilon > 0.0)) {
    throw std::invalid_argument("cinco needs epsilon > 0");
  }
  const auto levels = make_levels(cfg);
  std::vector<ScalarField> ts;
  for (const auto& l : levels) {
    ts.push_back(ScalarField::realize(l.dom, cfg.exponent));
  }
  HypothesisCheck positive{"0 < t_* and t^* finite", true, true, {}, ""};
  HypothesisCheck nonempty{"Omega_{1,eps}^t nonempty", true, true, {}, ""};
  std::vector<OmegaSet> omegas;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    positive.ok = positive.ok && ts[k].min() > 0.0;
    omegas.push_back(omega_set(ts[k], 1.0, *cfg.epsilon));
    nonempty.trend.emplace_back(levels[k].res, static_cast<double>(omegas.back().size()));
    nonempty.ok = nonempty.ok && !omegas.back().empty();
  }
  rep.hypotheses.push_back(positive);
  rep.hypotheses.push_back(nonempty);
  rep.hypotheses.push_back(ahlfors_check(levels));
  rep.hypotheses.push_back(log_holder_check("t", ts, levels));
  if (!positive.ok || !nonempty.ok) {
    rep.verdict = Verdict::preconditions_not_met;
    return rep;
  }

  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const Level& lvl = levels[k];
    const DiscreteDomain& dom = *lvl.dom;
    const std::size_t n = dom.size();
    const ScalarField& t = ts[k];
    const OmegaSet& om = omegas[k];
    const auto outside = om.complement();
    const std::vector<std::vector<double>> bias_fields{as_vector(t)};
    const auto bias = oscillation_bias(*lvl.index, bias_fields);

    std::vector<std::vector<double>> fields;
    std::vector<std::string> desc(cfg.trials);
    for (std::size_t tr = 0; tr < cfg.trials; ++tr) {
      Rng rng(derive_seed(seed, lvl.res, tr));
      auto rf = random_function(dom, rng, bias);
      const double norm =
          luxemburg_norm(rf.values, t.values(), dom, om.members(), cfg.norm_tolerance).value;
      ExactSum out;
      for (const auto i : outside) {
        out.add(std::fabs(rf.values[i]) * dom.mass(i));
      }
      const double scale = std::max(norm, out.value());
      std::vector<double> ft(n);
      for (std::size_t i = 0; i < n; ++i) {
        rf.values[i] /= scale;
        ft[i] = std::pow(std::fabs(rf.values[i]), t[i]);
      }
      fields.push_back(std::move(rf.values));
      fields.push_back(std::move(ft));
      desc[tr] = std::move(rf.descriptor);
    }
    const std::vector<double> a0{0.0};
    MaximalOptions opt{cfg.mode, cfg.depth, cfg.beta};
    const auto m = maximal_batch(*lvl.index, fields, a0, opt);
    LevelResult lr;
    lr.c = -1.0;
    for (std::size_t tr = 0; tr < cfg.trials; ++tr) {
      double best = -1.0;
      std::size_t arg = 0;
      for (const auto x : om.members()) {
        const double ratio = std::pow(m[2 * tr][x], t[x]) / (1.0 + m[2 * tr + 1][x]);
        if (ratio > best) {
          best = ratio;
          arg = x;
        }
      }
      merge(lr, best, Witness{lvl.res, tr, arg, desc[tr], best});
    }
    rep.trend.emplace_back(lvl.res, lr.c);
    rep.runtime_s.push_back(seconds_since(t0));
    take_witness(rep, lr, k == 0);
  }
  finish(rep);
  rep.verdict = trend_verdict(rep, cfg.stability);
  return rep;
}

FieldExpr random_unit_field(Rng& rng, const DomainSpec& spec) {
  const std::size_t dim = spec.dim;
  switch (rng.index(3)) {
    case 0:
      return expr::Constant{rng.uniform()};
    case 1: {
      const double u0 = rng.uniform();
      const double u1 = rng.uniform() * (1.0 - u0);
      Point x0(dim);
      // Centers on cell boundaries keep the nearest atoms at a fixed fraction
      // of the spacing at every resolution.
      for (std::size_t i = 0; i < dim; ++i) {
        x0[i] = spec.lo[i] + 0.5 * static_cast<double>(rng.index(3)) * (spec.hi[i] - spec.lo[i]);
      }
      return expr::LogPerturbed{u0, u1, x0};
    }
    default: {
      // Affine along axis 0, ranging over [u0, u1] across the box.
      const double u0 = rng.uniform();
      const double u1 = rng.uniform();
      std::vector<double> g(dim, 0.0);
      const double len = spec.hi[0] - spec.lo[0];
      g[0] = (u1 - u0) / len;
      return expr::Linear{u0 - g[0] * spec.lo[0], g};
    }
  }
}

VerificationReport verify_reverse(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.domain.builder != "lebesgue_grid") {
    throw std::invalid_argument("reverse needs a Lebesgue grid on a cube");
  }
  for (std::size_t i = 1; i < cfg.domain.dim; ++i) {
    if (cfg.domain.hi[i] - cfg.domain.lo[i] != cfg.domain.hi[0] - cfg.domain.lo[0]) {
      throw std::invalid_argument("reverse needs a cube, not a general box");
    }
  }
  const auto levels = make_levels(cfg);
  std::vector<ScalarField> ws;
  for (const auto& l : levels) {
    ws.push_back(realize_weight(l.dom, cfg.weight));
    if (!(ws.back().min() >= 1.0)) {
      throw std::invalid_argument("reverse needs w >= 1 at every atom");
    }
  }
  VerificationReport rep{cfg.id, seed, 0};

  // delta-hat: largest 2^-k with w^(1+delta) in A_1 stably.
  HypothesisCheck dh{"w^(1+delta) in A_1 for some dyadic delta", false, true, {}, ""};
  double delta_hat = 0.0;
  for (std::size_t k = 0; k < cfg.delta_steps; ++k) {
    const double delta = std::ldexp(1.0, -static_cast<int>(k));
    std::vector<std::pair<std::size_t, double>> tr;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      tr.emplace_back(levels[l].res,
                      a1_constant(pointwise_power(ws[l], 1.0 + delta), *levels[l].index,
                                  cfg.sampler)
                          .value);
    }
    dh.trend = tr;
    if (is_stable(tr, cfg.stability)) {
      dh.ok = true;
      delta_hat = delta;
      break;
    }
  }
  dh.detail = dh.ok ? "delta_hat=" + fmt(delta_hat) : "no dyadic delta on the ladder";
  rep.hypotheses.push_back(dh);
  {
    HypothesisCheck base{"w in A_1", true, true, {}, ""};
    for (std::size_t l = 0; l < levels.size(); ++l) {
      base.trend.emplace_back(levels[l].res,
                              a1_constant(ws[l], *levels[l].index, cfg.sampler).value);
    }
    base.ok = is_stable(base.trend, cfg.stability);
    rep.hypotheses.push_back(base);
  }
  if (!dh.ok || !rep.hypotheses.back().ok) {
    rep.verdict = Verdict::preconditions_not_met;
    return rep;
  }

  std::vector<FieldExpr> family = cfg.a_family;
  if (family.empty()) {
    Rng rng(derive_seed(seed, 0xa5a5));
    for (std::size_t i = 0; i < cfg.family_size; ++i) {
      family.push_back(random_unit_field(rng, cfg.domain));
    }
  }
  rep.trials = family.size();
  std::vector<double> worst(levels.size(), -1.0);
  bool all_ok = true;
  for (std::size_t m = 0; m < family.size(); ++m) {
    std::vector<ScalarField> as;
    std::vector<std::pair<std::size_t, double>> a1t;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const ScalarField g = ScalarField::realize(levels[l].dom, family[m]);
      if (g.min() < 0.0 || g.max() > 1.0) {
        throw std::invalid_argument("a_family member " + std::to_string(m) +
                                    " must take values in [0, 1]");
      }
      std::vector<double> a(g.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = 1.0 + delta_hat * g[i];
      }
      as.emplace_back(levels[l].dom, std::move(a));
      const CubeConstant cc =
          a1_constant(variable_power_weight(ws[l], as.back()), *levels[l].index, cfg.sampler);
      a1t.emplace_back(levels[l].res, cc.value);
      if (cc.value > worst[l]) {
        worst[l] = cc.value;
      }
      LevelResult lr{cc.value, Witness{levels[l].res, m, cc.center, kind_name(family[m]),
                                       cc.value}};
      take_witness(rep, lr, m == 0 && l == 0);
    }
    auto lh = log_holder_check("a[" + std::to_string(m) + "]", as, levels);
    const bool stable = is_stable(a1t, cfg.stability);
    if (!lh.ok || !stable) {
      all_ok = false;
      lh.detail += stable ? "" : "; A_1 constant of w^a unstable";
      lh.detail += "; g=" + field_to_json(family[m]).dump();
      rep.hypotheses.push_back(lh);
    }
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    rep.trend.emplace_back(levels[l].res, worst[l]);
  }
  finish(rep);
  rep.verdict = all_ok ? trend_verdict(rep, cfg.stability) : Verdict::unstable;
  return rep;
}

VerificationReport verify_factorization(const RunConfig& cfg, std::uint64_t seed) {
  VerificationReport rep{cfg.id, seed, cfg.trials};
  std::map<std::size_t, double> by_size;
  bool violated = false;
  bool first = true;
  const double beta = *cfg.beta;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(derive_seed(seed, 0, t));
    DomainSpec spec = cfg.domain;
    std::vector<std::size_t> res_pool = cfg.resolutions;
    if (spec.builder == "mixed") {
      spec.builder = rng.bernoulli(0.5) ? "paper_example" : "lebesgue_grid";
      spec.dim = 2;
      spec.lo = {0.0, 0.0};
      spec.hi = {1.0, 1.0};
    }
    if (spec.builder == "paper_example") {
      std::vector<std::size_t> keep;
      for (const auto r : res_pool) {
        if (r + r * r <= 64) {
          keep.push_back(r);
        }
      }
      if (!keep.empty()) {
        res_pool = keep;
      }
    }
    DomainPtr dom;
    if (spec.builder == "file") {
      dom = build_domain(spec, 0);
    } else {
      dom = build_domain(spec, res_pool[rng.index(res_pool.size())]);
    }
    const std::size_t n = dom->size();
    const double alpha = beta * rng.uniform(0.05, 0.9);
    const double p_cap = std::min(4.0, 0.95 * beta / alpha);
    const double p_lo = rng.uniform(1.05, 0.5 * (1.05 + p_cap));
    const double p_hi = rng.uniform(p_lo, p_cap);
    std::vector<double> pv(n), wv(n);
    for (std::size_t i = 0; i < n; ++i) {
      pv[i] = rng.uniform(p_lo, p_hi);
      wv[i] = std::exp(rng.uniform(-2.0, 2.0));
    }
    const ScalarField p(dom, pv);
    const ScalarField w(dom, wv);
    const auto sys = build_exponent_system(p, alpha, beta);
    const CubeIndex index(dom);
    auto rf = random_function(*dom, rng);
    const ScalarField f(dom, rf.values);
    const auto pr = factorization_check(sys, f, w, index, cfg.tolerance);
    violated = violated || pr.violated;
    auto& slot = by_size[n];
    slot = std::max(slot, pr.max_ratio);
    const LevelResult lr{pr.max_ratio,
                         Witness{n, t, pr.atom,
                                 spec.builder + ":" + rf.descriptor + ",alpha=" + fmt(alpha),
                                 pr.max_ratio}};
    take_witness(rep, lr, first);
    first = false;
  }
  for (const auto& [size, c] : by_size) {
    rep.trend.emplace_back(size, c);
  }
  finish(rep);
  rep.verdict = violated ? Verdict::violated : Verdict::pass;
  return rep;
}

}  // namespace

VerificationReport run_verifier(const RunConfig& cfg_in, std::uint64_t seed) {
  RunConfig cfg = cfg_in;
  materialize(cfg);
  const std::string& id = cfg.id;
  if (id == "factorization") {
    return verify_factorization(cfg, seed);
  }
  if (id == "welland") {
    return verify_welland(cfg, seed);
  }
  if (id == "tres") {
    return verify_tres(cfg, seed);
  }
  if (id == "cinco") {
    return verify_cinco(cfg, seed);
  }
  if (id == "reverse") {
    return verify_reverse(cfg, seed);
  }
  return verify_norm_family(cfg, seed);
}

}  // namespace varlex
