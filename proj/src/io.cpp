#include "varlex/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace varlex {

namespace {

std::string compose(const std::string& source, std::size_t line, const std::string& field,
                    const std::string& msg) {
  std::string out = source.empty() ? "<input>" : source;
  if (line > 0) {
    out += ":" + std::to_string(line);
  }
  if (!field.empty()) {
    out += ": field '" + field + "'";
  }
  return out + ": " + msg;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("", 0, field, msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& need(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    fail(join(path, key), "missing");
  }
  return j.at(key);
}

double get_number(const Json& j, const std::string& path) {
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  fail(path, "expected a number");
}

double num_at(const Json& j, const std::string& key, const std::string& path) {
  return get_number(need(j, key, path), join(path, key));
}

std::size_t get_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    fail(path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> get_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    fail(path, "expected an array of numbers");
  }
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    v.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return v;
}

std::vector<double> vec_at(const Json& j, const std::string& key, const std::string& path) {
  return get_vector(need(j, key, path), join(path, key));
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) {
    fail(path, "expected a string");
  }
  return j.get<std::string>();
}

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) {
    fail(path, "expected an object");
  }
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      fail(join(path, k), "unknown key");
    }
  }
}

Json vec_json(std::span<const double> v) {
  Json a = Json::array();
  for (const double x : v) {
    a.push_back(number(x));
  }
  return a;
}

Json trend_json(const std::vector<std::pair<std::size_t, double>>& t) {
  Json a = Json::array();
  for (const auto& [res, c] : t) {
    a.push_back(Json::array({res, number(c)}));
  }
  return a;
}

}  // namespace

ConfigError::ConfigError(std::string source, std::size_t line, std::string field,
                         const std::string& msg)
    : std::runtime_error(compose(source, line, field, msg)), field_(std::move(field)),
      line_(line) {}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) {
      line += text[i] == '\n' ? 1 : 0;
    }
    throw ConfigError(source, line, "", "malformed JSON");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path, 0, "", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path), path);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

Json number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return v;
}

Json field_to_json(const FieldExpr& e) {
  Json j;
  j["kind"] = kind_name(e);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, expr::Constant>) {
          j["value"] = number(x.value);
        } else if constexpr (std::is_same_v<T, expr::Power>) {
          j["x0"] = vec_json(x.x0);
          j["eta"] = number(x.eta);
        } else if constexpr (std::is_same_v<T, expr::ProductPower>) {
          j["center"] = vec_json(x.center);
          j["eta"] = vec_json(x.eta);
        } else if constexpr (std::is_same_v<T, expr::LogPerturbed>) {
          j["base"] = number(x.base);
          j["amplitude"] = number(x.amplitude);
          j["x0"] = vec_json(x.x0);
        } else if constexpr (std::is_same_v<T, expr::Linear>) {
          j["base"] = number(x.base);
          j["gradient"] = vec_json(x.gradient);
        } else if constexpr (std::is_same_v<T, expr::Step>) {
          j["axis"] = x.axis;
          j["at"] = number(x.at);
          j["below"] = number(x.below);
          j["above"] = number(x.above);
        } else if constexpr (std::is_same_v<T, expr::ClippedPower>) {
          Json s = Json::array();
          for (const auto& p : x.singularities) {
            s.push_back(vec_json(p));
          }
          j["singularities"] = s;
          j["theta"] = number(x.theta);
        } else if constexpr (std::is_same_v<T, expr::ExampleWeight>) {
          j["a"] = number(x.a);
        } else {
          j["values"] = vec_json(x.values);
        }
      },
      e);
  return j;
}

FieldExpr field_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) {
    fail(path, "expected an object with a 'kind'");
  }
  const std::string kind = get_string(need(j, "kind", path), join(path, "kind"));
  if (kind == "constant") {
    only_keys(j, {"kind", "value"}, path);
    return expr::Constant{num_at(j, "value", path)};
  }
  if (kind == "power") {
    only_keys(j, {"kind", "x0", "eta"}, path);
    return expr::Power{vec_at(j, "x0", path), num_at(j, "eta", path)};
  }
  if (kind == "product_power") {
    only_keys(j, {"kind", "center", "eta"}, path);
    auto c = vec_at(j, "center", path);
    auto e = vec_at(j, "eta", path);
    if (c.size() != e.size()) {
      fail(join(path, "eta"), "must have one entry per coordinate of 'center'");
    }
    return expr::ProductPower{std::move(c), std::move(e)};
  }
  if (kind == "logperturb") {
    only_keys(j, {"kind", "base", "amplitude", "x0"}, path);
    return expr::LogPerturbed{num_at(j, "base", path), num_at(j, "amplitude", path),
                              vec_at(j, "x0", path)};
  }
  if (kind == "linear") {
    only_keys(j, {"kind", "base", "gradient"}, path);
    return expr::Linear{num_at(j, "base", path), vec_at(j, "gradient", path)};
  }
  if (kind == "step") {
    only_keys(j, {"kind", "axis", "at", "below", "above"}, path);
    return expr::Step{get_count(need(j, "axis", path), join(path, "axis")),
                      num_at(j, "at", path), num_at(j, "below", path),
                      num_at(j, "above", path)};
  }
  if (kind == "clipped_power") {
    only_keys(j, {"kind", "singularities", "theta"}, path);
    const Json& s = need(j, "singularities", path);
    if (!s.is_array() || s.empty()) {
      fail(join(path, "singularities"), "expected a nonempty array of points");
    }
    expr::ClippedPower c;
    for (std::size_t i = 0; i < s.size(); ++i) {
      c.singularities.push_back(
          get_vector(s[i], join(path, "singularities") + "[" + std::to_string(i) + "]"));
    }
    c.theta = num_at(j, "theta", path);
    return c;
  }
  if (kind == "paper_example") {
    only_keys(j, {"kind", "a"}, path);
    return expr::ExampleWeight{num_at(j, "a", path)};
  }
  if (kind == "table") {
    only_keys(j, {"kind", "values"}, path);
    return expr::Table{vec_at(j, "values", path)};
  }
  fail(join(path, "kind"), "unknown kind '" + kind + "'");
}

Json weight_to_json(const WeightSpec& w) {
  if (!w.samko_w2) {
    return field_to_json(w.w);
  }
  Json j;
  j["kind"] = "samko";
  j["w1"] = field_to_json(w.w);
  j["w2"] = field_to_json(*w.samko_w2);
  return j;
}

WeightSpec weight_from_json(const Json& j, const std::string& path) {
  if (j.is_object() && j.contains("kind") && j["kind"] == "samko") {
    only_keys(j, {"kind", "w1", "w2"}, path);
    return {field_from_json(need(j, "w1", path), join(path, "w1")),
            field_from_json(need(j, "w2", path), join(path, "w2"))};
  }
  return {field_from_json(j, path), std::nullopt};
}

Json domain_to_json(const DiscreteDomain& d) {
  Json j;
  j["ambient_dim"] = d.ambient_dim();
  j["ahlfors_dim"] = number(d.ahlfors_dim());
  Json atoms = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    Json a;
    a["coords"] = vec_json(d.coords(i));
    a["mass"] = number(d.mass(i));
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

DiscreteDomain domain_from_json(const Json& j, const std::string& path) {
  only_keys(j, {"ambient_dim", "ahlfors_dim", "atoms"}, path);
  const std::size_t dim = get_count(need(j, "ambient_dim", path), join(path, "ambient_dim"));
  const double beta = num_at(j, "ahlfors_dim", path);
  const Json& arr = need(j, "atoms", path);
  if (!arr.is_array()) {
    fail(join(path, "atoms"), "expected an array");
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = join(path, "atoms") + "[" + std::to_string(i) + "]";
    only_keys(arr[i], {"coords", "mass"}, p);
    atoms.push_back(Atom{vec_at(arr[i], "coords", p), num_at(arr[i], "mass", p)});
  }
  try {
    return DiscreteDomain(dim, std::move(atoms), beta);
  } catch (const std::invalid_argument& e) {
    fail(path.empty() ? "atoms" : path, e.what());
  }
}

DiscreteDomain load_domain_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const Json j = parse_json_text(text, path);
  try {
    return domain_from_json(j, "");
  } catch (const ConfigError& e) {
    const auto dot = e.field().find_last_of('.');
    std::string key = dot == std::string::npos ? e.field() : e.field().substr(dot + 1);
    key = key.substr(0, key.find('['));
    const std::string msg = e.what();
    throw ConfigError(path, line_of_key(text, key), e.field(),
                      msg.substr(msg.rfind(": ") + 2));
  }
}

Json domain_spec_to_json(const DomainSpec& s) {
  Json j;
  j["builder"] = s.builder;
  j["dim"] = s.dim;
  j["lo"] = vec_json(s.lo);
  j["hi"] = vec_json(s.hi);
  j["path"] = s.path;
  return j;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["id"] = c.id;
  j["domain"] = domain_spec_to_json(c.domain);
  j["resolutions"] = c.resolutions;
  j["exponent"] = field_to_json(c.exponent);
  j["alpha"] = number(c.alpha);
  j["beta"] = c.beta ? number(*c.beta) : Json(nullptr);
  j["epsilon"] = c.epsilon ? number(*c.epsilon) : Json(nullptr);
  j["weight"] = weight_to_json(c.weight);
  j["r"] = number(c.r);
  j["delta_steps"] = c.delta_steps;
  j["x0"] = vec_json(c.x0);
  Json fam = Json::array();
  for (const auto& a : c.a_family) {
    fam.push_back(field_to_json(a));
  }
  j["a_family"] = std::move(fam);
  j["family_size"] = c.family_size;
  j["trials"] = c.trials;
  j["tolerance"] = number(c.tolerance);
  j["stability"] = number(c.stability);
  j["mode"] = to_string(c.mode);
  j["depth"] = c.depth;
  j["sampler"] = Json{{"mode", to_string(c.sampler.mode)}, {"depth", c.sampler.depth}};
  j["norm_tolerance"] = number(c.norm_tolerance);
  return j;
}

namespace {

Mode mode_from(const Json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  try {
    return parse_mode(s);
  } catch (const std::invalid_argument&) {
    fail(path, "expected 'exact' or 'dyadic'");
  }
}

int depth_from(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    fail(path, "expected an integer");
  }
  return j.get<int>();
}

std::optional<double> opt_number(const Json& j, const std::string& path) {
  if (j.is_null()) {
    return std::nullopt;
  }
  return get_number(j, path);
}

}  // namespace

RunConfig config_from_json(const std::string& id, const Json& j) {
  RunConfig c;
  try {
    c = default_config(id);
  } catch (const std::invalid_argument& e) {
    fail("id", e.what());
  }
  if (j.is_null()) {
    return c;
  }
  only_keys(j,
            {"id", "domain", "resolutions", "exponent", "alpha", "beta", "epsilon", "weight", "r",
             "delta_steps", "x0", "a_family", "family_size", "trials", "tolerance", "stability",
             "mode", "depth", "sampler", "norm_tolerance"},
            "");
  if (j.contains("id") && get_string(j["id"], "id") != id) {
    fail("id", "config is for '" + j["id"].get<std::string>() + "', not '" + id + "'");
  }
  if (j.contains("domain")) {
    const Json& d = j["domain"];
    only_keys(d, {"builder", "dim", "lo", "hi", "path"}, "domain");
    DomainSpec s = c.domain;
    if (d.contains("builder")) {
      s.builder = get_string(d["builder"], "domain.builder");
    }
    if (d.contains("dim")) {
      s.dim = get_count(d["dim"], "domain.dim");
      if (!d.contains("lo")) {
        s.lo.assign(s.dim, 0.0);
      }
      if (!d.contains("hi")) {
        s.hi.assign(s.dim, 1.0);
      }
    }
    if (d.contains("lo")) {
      s.lo = get_vector(d["lo"], "domain.lo");
    }
    if (d.contains("hi")) {
      s.hi = get_vector(d["hi"], "domain.hi");
    }
    if (d.contains("path")) {
      s.path = get_string(d["path"], "domain.path");
    }
    c.domain = s;
    if (s.builder == "paper_example" || s.builder == "file") {
      c.beta.reset();
    }
  }
  if (j.contains("resolutions")) {
    const Json& r = j["resolutions"];
    if (!r.is_array()) {
      fail("resolutions", "expected an array of integers");
    }
    c.resolutions.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
      c.resolutions.push_back(get_count(r[i], "resolutions[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("exponent")) {
    c.exponent = field_from_json(j["exponent"], "exponent");
  }
  if (j.contains("alpha")) {
    c.alpha = get_number(j["alpha"], "alpha");
  }
  if (j.contains("beta")) {
    c.beta = opt_number(j["beta"], "beta");
  } else if (j.contains("domain") && j["domain"].contains("dim")) {
    c.beta.reset();
  }
  if (j.contains("epsilon")) {
    c.epsilon = opt_number(j["epsilon"], "epsilon");
  }
  if (j.contains("weight")) {
    c.weight = weight_from_json(j["weight"], "weight");
  }
  if (j.contains("r")) {
    c.r = get_number(j["r"], "r");
  }
  if (j.contains("delta_steps")) {
    c.delta_steps = get_count(j["delta_steps"], "delta_steps");
  }
  if (j.contains("x0")) {
    c.x0 = get_vector(j["x0"], "x0");
  }
  if (j.contains("a_family")) {
    const Json& a = j["a_family"];
    if (!a.is_array()) {
      fail("a_family", "expected an array of fields");
    }
    c.a_family.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      c.a_family.push_back(field_from_json(a[i], "a_family[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("family_size")) {
    c.family_size = get_count(j["family_size"], "family_size");
  }
  if (j.contains("trials")) {
    c.trials = get_count(j["trials"], "trials");
  }
  if (j.contains("tolerance")) {
    c.tolerance = get_number(j["tolerance"], "tolerance");
  }
  if (j.contains("stability")) {
    c.stability = get_number(j["stability"], "stability");
  }
  if (j.contains("mode")) {
    c.mode = mode_from(j["mode"], "mode");
  }
  if (j.contains("depth")) {
    c.depth = depth_from(j["depth"], "depth");
  }
  if (j.contains("sampler")) {
    const Json& s = j["sampler"];
    only_keys(s, {"mode", "depth"}, "sampler");
    if (s.contains("mode")) {
      c.sampler.mode = mode_from(s["mode"], "sampler.mode");
    }
    if (s.contains("depth")) {
      c.sampler.depth = depth_from(s["depth"], "sampler.depth");
    }
  }
  if (j.contains("norm_tolerance")) {
    c.norm_tolerance = get_number(j["norm_tolerance"], "norm_tolerance");
  }
  return c;
}

Json report_to_json(const VerificationReport& r, const RunConfig& cfg) {
  Json j;
  j["id"] = r.id;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["max_ratio"] = number(r.max_ratio);
  j["witness"] = Json{{"resolution", r.witness.resolution},
                      {"trial", r.witness.trial},
                      {"atom", r.witness.atom},
                      {"input", r.witness.input},
                      {"ratio", number(r.witness.ratio)}};
  j["trend"] = trend_json(r.trend);
  j["verdict"] = to_string(r.verdict);
  Json hs = Json::array();
  for (const auto& h : r.hypotheses) {
    hs.push_back(Json{{"name", h.name},
                      {"ok", h.ok},
                      {"gating", h.gating},
                      {"trend", trend_json(h.trend)},
                      {"detail", h.detail}});
  }
  j["hypotheses"] = std::move(hs);
  j["config"] = config_to_json(cfg);
  return j;
}

Json norm_result_to_json(const NormResult& r) {
  return Json{{"value", number(r.value)},
              {"iterations", r.iterations},
              {"bracket", Json::array({number(r.bracket.first), number(r.bracket.second)})},
              {"modular_at_value", number(r.modular_at_value)}};
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  if (key.empty()) {
    return 0;
  }
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) {
    return 0;
  }
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    line += text[i] == '\n' ? 1 : 0;
  }
  return line;
}

}  // namespace varlex
