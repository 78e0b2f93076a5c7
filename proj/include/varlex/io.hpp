#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "varlex/domain.hpp"
#include "varlex/fields.hpp"
#include "varlex/space.hpp"
#include "varlex/verify.hpp"
#include "varlex/weights.hpp"

namespace varlex {

using Json = nlohmann::ordered_json;

// Malformed input. `field` is a dotted path into the document; `line` is
// 1-based (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::size_t line, std::string field, const std::string& msg);

  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

// Parses text, reporting syntax errors with their line.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

// Writes to a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

// Finite doubles stay numbers; +-inf and NaN become strings.
Json number(double v);

Json field_to_json(const FieldExpr& e);
FieldExpr field_from_json(const Json& j, const std::string& path);

Json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const Json& j, const std::string& path);

Json domain_to_json(const DiscreteDomain& d);
DiscreteDomain domain_from_json(const Json& j, const std::string& path);
DiscreteDomain load_domain_file(const std::string& path);

Json domain_spec_to_json(const DomainSpec& s);

Json config_to_json(const RunConfig& c);
// Overlays `j` on the defaults of `id`. Unknown keys are rejected.
RunConfig config_from_json(const std::string& id, const Json& j);

Json report_to_json(const VerificationReport& r, const RunConfig& cfg);
Json norm_result_to_json(const NormResult& r);

// Finds the line of the first occurrence of `"key"` in `text` (0 if absent).
std::size_t line_of_key(const std::string& text, const std::string& key);

}  // namespace varlex
