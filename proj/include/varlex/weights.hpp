#pragma once

#include <cstddef>
#include <optional>

#include "varlex/cube_index.hpp"
#include "varlex/fields.hpp"
#include "varlex/operators.hpp"

namespace varlex {

// Cubes centered at atoms: every shell (exact) or sides diameter * 2^-k,
// k = 0..depth (dyadic).
struct CubeSampler {
  Mode mode = Mode::exact;
  int depth = kDefaultDyadicDepth;
};

// Largest sampled cube quantity together with the cube that attains it.
struct CubeConstant {
  double value = 0.0;
  std::size_t center = 0;
  double side = 0.0;
};

// max over sampled Q of avg_Q(w) * avg_Q(w^(-1/(s-1)))^(s-1); s > 1.
CubeConstant muckenhoupt_constant(const ScalarField& w, double s, const CubeIndex& index,
                                  const CubeSampler& sampler = {});

// max over sampled Q of avg_Q(w) / min_Q(w).
CubeConstant a1_constant(const ScalarField& w, const CubeIndex& index,
                         const CubeSampler& sampler = {});

// max over sampled Q of mu(Q)^(min_Q p - max_Q p).
CubeConstant measure_exponent_constant(const ScalarField& p, const CubeIndex& index,
                                       const CubeSampler& sampler = {});

// |x - x0|^eta; rejects an atom at x0 when eta < 0.
ScalarField build_power_weight(DomainPtr domain, const Point& x0, double eta);

struct PowerWindow {
  double lower = 0.0;  // -n / q(x0)
  double upper = 0.0;  // n / p'(x0)
  bool admissible = false;
};

PowerWindow power_weight_window(const ExponentSystem& sys, const Point& x0, double eta);

// Value of a field at an arbitrary point: the analytic descriptor when present,
// otherwise the nearest atom (lowest index on ties).
double field_value_at(const ScalarField& f, const Point& x);

// w1^(1/q_eps^-) * w2^((1/q_eps^-)(1 - (s_eps^-)_*)).
ScalarField build_samko_weight(const ScalarField& w1, const ScalarField& w2,
                               const ExponentSystem& sys);

// w^a pointwise; requires w >= 1 and a >= 1.
ScalarField variable_power_weight(const ScalarField& w, const ScalarField& a);

// w^e pointwise for a positive weight and any exponent field.
ScalarField pointwise_power(const ScalarField& w, const ScalarField& e);
ScalarField pointwise_power(const ScalarField& w, double e);

// A weight is an analytic field, or the composite built from two of them.
struct WeightSpec {
  FieldExpr w;
  std::optional<FieldExpr> samko_w2;
};

// `sys` is required for the composite.
ScalarField realize_weight(const DomainPtr& domain, const WeightSpec& spec,
                           const ExponentSystem* sys = nullptr);

}  // namespace varlex
