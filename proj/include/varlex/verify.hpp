#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varlex/cube_index.hpp"
#include "varlex/fields.hpp"
#include "varlex/operators.hpp"
#include "varlex/rng.hpp"
#include "varlex/weights.hpp"

namespace varlex {

enum class Verdict { pass, unstable, violated, preconditions_not_met };

std::string to_string(Verdict v);

struct DomainSpec {
  // lebesgue_grid | paper_example | file | mixed (factorization only)
  std::string builder = "lebesgue_grid";
  std::size_t dim = 2;
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  std::string path;
};

// Every knob of every verifier; unused knobs are carried along so an echoed
// config reproduces a run exactly.
struct RunConfig {
  std::string id;
  DomainSpec domain;
  std::vector<std::size_t> resolutions;
  FieldExpr exponent = expr::Constant{2.0};
  double alpha = 0.0;
  std::optional<double> beta;
  std::optional<double> epsilon;
  WeightSpec weight{expr::Constant{1.0}, std::nullopt};
  double r = 2.0;
  std::size_t delta_steps = 4;
  Point x0{0.5, 0.5};
  std::vector<FieldExpr> a_family;
  std::size_t family_size = 20;
  std::size_t trials = 50;
  double tolerance = 1e-9;
  double stability = 2.0;
  Mode mode = Mode::exact;
  int depth = kDefaultDyadicDepth;
  CubeSampler sampler;
  double norm_tolerance = 1e-10;
};

const std::vector<std::string>& verifier_ids();

// Fully populated defaults for a verifier id; throws for unknown ids.
RunConfig default_config(const std::string& id);

// Fills beta from the domain and validates shape constraints.
void materialize(RunConfig& cfg);

DomainPtr build_domain(const DomainSpec& spec, std::size_t resolution);

struct HypothesisCheck {
  std::string name;
  bool ok = true;
  bool gating = true;
  std::vector<std::pair<std::size_t, double>> trend;
  std::string detail;
};

struct Witness {
  std::size_t resolution = 0;
  std::size_t trial = 0;
  std::size_t atom = 0;
  std::string input;
  double ratio = 0.0;
};

struct VerificationReport {
  std::string id;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double max_ratio = 0.0;
  Witness witness;
  std::vector<std::pair<std::size_t, double>> trend;
  Verdict verdict = Verdict::pass;
  std::vector<HypothesisCheck> hypotheses;
  // Wall time per trend entry; not part of the serialized report.
  std::vector<double> runtime_s;
};

VerificationReport run_verifier(const RunConfig& cfg, std::uint64_t seed);

// Random nonnegative test functions: spikes, bumps, heavy-tailed values and
// mixtures. Half of the spikes land on atoms drawn proportionally to `bias`
// when it has positive mass. `support`, when given, confines f to those atoms.
struct RandomFunction {
  std::vector<double> values;
  std::string descriptor;
};

RandomFunction random_function(const DiscreteDomain& domain, Rng& rng,
                               std::span<const double> bias = {},
                               std::span<const std::uint32_t> support = {});

// Per-atom oscillation of the given fields over the nearest nonzero shell.
std::vector<double> oscillation_bias(const CubeIndex& index,
                                     std::span<const std::vector<double>> fields);

// Trend is stable when every value is finite and last / first <= factor.
bool is_stable(const std::vector<std::pair<std::size_t, double>>& trend, double factor);

// Log-Hölder estimates grow like log(1/h) across a jump. Flags a growing
// estimate whose neighbouring-atom oscillation (max of oscillation_bias) keeps
// at least 0.9 of its coarsest value; continuous fields see it decay.
bool log_holder_diverges(const std::vector<std::pair<std::size_t, double>>& estimate,
                         const std::vector<std::pair<std::size_t, double>>& oscillation);

// Pointwise checks at a single resolution, exposed for tests.
struct PointwiseResult {
  double max_ratio = 0.0;
  std::size_t atom = 0;
  bool violated = false;
};

PointwiseResult factorization_check(const ExponentSystem& sys, const ScalarField& f,
                                    const ScalarField& w, const CubeIndex& index,
                                    double tolerance);

PointwiseResult welland_check(const ScalarField& f, double alpha, double epsilon,
                              const CubeIndex& index, std::optional<double> beta = std::nullopt);

PointwiseResult pointwise_maximal_check(const ScalarField& t, const ScalarField& f,
                                        const OmegaSet& omega, const CubeIndex& index);

}  // namespace varlex
