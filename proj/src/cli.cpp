#include "varlex/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "varlex/cube_index.hpp"
#include "varlex/io.hpp"
#include "varlex/operators.hpp"
#include "varlex/space.hpp"
#include "varlex/verify.hpp"
#include "varlex/weights.hpp"

namespace varlex::cli {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DomainArgs {
  std::string domain;
  std::size_t resolution = 16;
  std::size_t dim = 2;
  std::optional<double> beta;
};

void add_domain_options(CLI::App* sub, DomainArgs& d) {
  sub->add_option("--domain", d.domain, "domain JSON file, or lebesgue_grid / paper_example")
      ->required();
  sub->add_option("--resolution", d.resolution, "cells per axis for builder domains");
  sub->add_option("--dim", d.dim, "dimension of lebesgue_grid");
}

DomainPtr load_domain(const DomainArgs& a) {
  DiscreteDomain dom = [&] {
    if (a.domain == "lebesgue_grid") {
      return build_unit_grid(a.dim, a.resolution);
    }
    if (a.domain == "paper_example") {
      return build_example_domain(a.resolution);
    }
    return load_domain_file(a.domain);
  }();
  if (a.beta && *a.beta != dom.ahlfors_dim()) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      atoms.push_back(dom.atom(i));
    }
    dom = DiscreteDomain(dom.ambient_dim(), std::move(atoms), *a.beta);
  }
  return std::make_shared<const DiscreteDomain>(std::move(dom));
}

ScalarField load_field(const std::string& path, const DomainPtr& dom) {
  const std::string text = read_text_file(path);
  const Json j = parse_json_text(text, path);
  FieldExpr e;
  try {
    e = field_from_json(j, "");
  } catch (const ConfigError& ce) {
    throw ConfigError(path, line_of_key(text, ce.field()), ce.field(), "invalid field");
  }
  return ScalarField::realize(dom, e);
}

std::vector<std::uint32_t> load_subset(const std::string& path, std::size_t n) {
  const Json j = read_json_file(path);
  const Json& arr = j.is_object() && j.contains("atoms") ? j["atoms"] : j;
  if (!arr.is_array()) {
    throw ConfigError(path, 0, "atoms", "expected an array of atom indices");
  }
  std::vector<std::uint32_t> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() >= n) {
      throw ConfigError(path, 0, "atoms", "atom index out of range");
    }
    out.push_back(v.get<std::uint32_t>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::violated:
      return 1;
    case Verdict::preconditions_not_met:
      return 2;
    default:
      return 0;
  }
}

RunConfig load_config(const std::string& id, const std::string& path) {
  if (path.empty()) {
    return default_config(id);
  }
  const std::string text = read_text_file(path);
  const Json j = parse_json_text(text, path);
  try {
    return config_from_json(id, j);
  } catch (const ConfigError& e) {
    std::string key = e.field();
    const auto dot = key.find_last_of('.');
    if (dot != std::string::npos) {
      key = key.substr(dot + 1);
    }
    key = key.substr(0, key.find('['));
    const std::string msg = e.what();
    throw ConfigError(path, line_of_key(text, key), e.field(), msg.substr(msg.rfind(": ") + 2));
  }
}

void apply_threads() {
  const char* env = std::getenv("VARLEX_THREADS");
  if (env == nullptr || *env == '\0') {
    return;
  }
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw std::invalid_argument("VARLEX_THREADS must be a positive integer");
  }
  omp_set_num_threads(static_cast<int>(n));
}

std::vector<std::string> tail_args(const std::vector<std::string>& args) {
  return {args.begin() + (args.empty() ? 0 : 1), args.end()};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-exponent Lebesgue space toolkit on atomic measures", "varlex"};
  app.require_subcommand(1);

  // norm
  DomainArgs norm_dom;
  std::string norm_field, norm_exp, norm_subset, norm_out;
  double norm_tol = kDefaultNormTolerance;
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a field");
  add_domain_options(norm, norm_dom);
  norm->add_option("--field", norm_field)->required();
  norm->add_option("--exponent", norm_exp)->required();
  norm->add_option("--subset", norm_subset, "JSON array of atom indices");
  norm->add_option("--tol", norm_tol);
  norm->add_option("--out", norm_out);

  // op
  DomainArgs op_dom;
  std::string op_kind, op_field, op_out, op_mode = "exact";
  double op_alpha = 0.0;
  int op_depth = kDefaultDyadicDepth;
  std::optional<double> op_beta;
  auto* op = app.add_subcommand("op", "Evaluate M_alpha or I_alpha; writes CSV");
  op->add_option("kind", op_kind)->required()->check(CLI::IsMember({"maximal", "frint"}));
  add_domain_options(op, op_dom);
  op->add_option("--field", op_field)->required();
  op->add_option("--alpha", op_alpha)->required();
  op->add_option("--beta", op_beta);
  op->add_option("--mode", op_mode)->check(CLI::IsMember({"exact", "dyadic"}));
  op->add_option("--depth", op_depth);
  op->add_option("--out", op_out);

  // weight-constant
  DomainArgs wc_dom;
  std::string wc_weight, wc_sampler = "exact", wc_exp, wc_out;
  double wc_s = 2.0;
  double wc_alpha = 0.0;
  std::optional<double> wc_eps;
  int wc_depth = kDefaultDyadicDepth;
  auto* wc = app.add_subcommand("weight-constant", "Muckenhoupt A_s constant (s = 1 gives A_1)");
  add_domain_options(wc, wc_dom);
  wc->add_option("--weight", wc_weight)->required();
  wc->add_option("--s", wc_s);
  wc->add_option("--sampler", wc_sampler)->check(CLI::IsMember({"exact", "dyadic"}));
  wc->add_option("--depth", wc_depth);
  wc->add_option("--exponent", wc_exp, "exponent p, needed by the samko composite");
  wc->add_option("--alpha", wc_alpha);
  wc->add_option("--epsilon", wc_eps);
  wc->add_option("--out", wc_out);

  // check-ahlfors
  DomainArgs ah_dom;
  std::string ah_out;
  auto* ah = app.add_subcommand("check-ahlfors", "Lower Ahlfors constant over dyadic radii");
  add_domain_options(ah, ah_dom);
  ah->add_option("--beta", ah_dom.beta);
  ah->add_option("--out", ah_out);

  // doubling
  DomainArgs db_dom;
  std::string db_out;
  std::vector<double> db_sides;
  std::vector<double> db_center;
  auto* db = app.add_subcommand("doubling", "mu(2Q)/mu(Q) along a cube family; writes CSV");
  add_domain_options(db, db_dom);
  db->add_option("--sides", db_sides, "cube sides (default 2^-1 .. 2^-6)")->delimiter(',');
  db->add_option("--center", db_center, "cube center; default is the corner family")
      ->delimiter(',');
  db->add_option("--out", db_out);

  // verify / study
  std::string vf_id, vf_config, vf_out;
  std::optional<std::uint64_t> vf_seed;
  auto* vf = app.add_subcommand("verify", "Run a verifier; writes a JSON report");
  vf->add_option("id", vf_id)->required()->check(CLI::IsMember(verifier_ids()));
  vf->add_option("--config", vf_config);
  vf->add_option("--seed", vf_seed);
  vf->add_option("--out", vf_out);

  std::string st_id, st_config, st_out;
  std::optional<std::uint64_t> st_seed;
  std::vector<std::size_t> st_res;
  auto* st = app.add_subcommand("study", "Refinement study; writes a trend CSV");
  st->add_option("id", st_id)->required()->check(CLI::IsMember(verifier_ids()));
  st->add_option("--config", st_config);
  st->add_option("--seed", st_seed);
  st->add_option("--resolutions", st_res)->delimiter(',');
  st->add_option("--out", st_out);

  std::vector<const char*> argv;
  argv.push_back("varlex");
  const auto rest = tail_args(args);
  for (const auto& a : rest) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    apply_threads();
    if (norm->parsed()) {
      const DomainPtr dom = load_domain(norm_dom);
      const ScalarField f = load_field(norm_field, dom);
      const ScalarField p = load_field(norm_exp, dom);
      std::vector<std::uint32_t> subset;
      Subset s = std::nullopt;
      if (!norm_subset.empty()) {
        subset = load_subset(norm_subset, dom->size());
        s = std::span<const std::uint32_t>(subset);
      }
      const NormResult r = luxemburg_norm(f, p, s, norm_tol);
      emit(norm_out, norm_result_to_json(r).dump(2) + "\n", out);
      return 0;
    }
    if (op->parsed()) {
      const DomainPtr dom = load_domain(op_dom);
      const ScalarField f = load_field(op_field, dom);
      const CubeIndex index(dom);
      std::ostringstream csv;
      csv << "atom";
      for (std::size_t d = 0; d < dom->ambient_dim(); ++d) {
        csv << ",x" << d;
      }
      csv << ",value,argmax_side\n";
      std::vector<double> value, side;
      if (op_kind == "maximal") {
        MaximalOptions opt{parse_mode(op_mode), op_depth, op_beta};
        const OperatorOutput o = maximal(f, index, op_alpha, opt);
        value.assign(o.field.values().begin(), o.field.values().end());
        side = o.argmax_side;
      } else {
        const OperatorOutput o = fractional_integral(f, index, op_alpha, op_beta);
        value.assign(o.field.values().begin(), o.field.values().end());
      }
      for (std::size_t i = 0; i < dom->size(); ++i) {
        csv << i;
        for (const double c : dom->coords(i)) {
          csv << "," << g17(c);
        }
        csv << "," << g17(value[i]) << ",";
        if (!side.empty()) {
          csv << g17(side[i]);
        }
        csv << "\n";
      }
      emit(op_out, csv.str(), out);
      return 0;
    }
    if (wc->parsed()) {
      const DomainPtr dom = load_domain(wc_dom);
      const std::string text = read_text_file(wc_weight);
      const WeightSpec spec = weight_from_json(parse_json_text(text, wc_weight), "");
      std::optional<ExponentSystem> sys;
      if (spec.samko_w2) {
        if (wc_exp.empty() || !wc_eps) {
          throw std::invalid_argument("samko weight needs --exponent, --alpha and --epsilon");
        }
        sys = build_exponent_system(load_field(wc_exp, dom), wc_alpha, std::nullopt, wc_eps);
      }
      const ScalarField w = realize_weight(dom, spec, sys ? &*sys : nullptr);
      const CubeIndex index(dom);
      const CubeSampler sampler{parse_mode(wc_sampler), wc_depth};
      const CubeConstant c = wc_s == 1.0 ? a1_constant(w, index, sampler)
                                         : muckenhoupt_constant(w, wc_s, index, sampler);
      const Json j{{"s", number(wc_s)},
                   {"value", number(c.value)},
                   {"center", c.center},
                   {"side", number(c.side)},
                   {"sampler", wc_sampler}};
      emit(wc_out, j.dump(2) + "\n", out);
      return 0;
    }
    if (ah->parsed()) {
      const DomainPtr dom = load_domain(ah_dom);
      const auto radii = dyadic_radii(*dom);
      if (radii.empty()) {
        throw std::invalid_argument("domain too coarse: no radius above the spacing floor");
      }
      std::vector<std::size_t> centers(dom->size());
      for (std::size_t i = 0; i < centers.size(); ++i) {
        centers[i] = i;
      }
      const double c = ahlfors_constant(*dom, radii, centers);
      const Json j{{"c_hat", number(c)},
                   {"beta", number(dom->ahlfors_dim())},
                   {"atoms", dom->size()},
                   {"radii", radii.size()}};
      emit(ah_out, j.dump(2) + "\n", out);
      return c > 0.0 ? 0 : 2;
    }
    if (db->parsed()) {
      const DomainPtr dom = load_domain(db_dom);
      if (db_sides.empty()) {
        for (int k = 1; k <= 6; ++k) {
          db_sides.push_back(std::ldexp(1.0, -k));
        }
      }
      std::vector<Cube> cubes;
      if (db_center.empty()) {
        if (dom->ambient_dim() != 2) {
          throw std::invalid_argument("the corner family needs a planar domain; pass --center");
        }
        cubes = example_corner_cubes(db_sides);
      } else {
        if (db_center.size() != dom->ambient_dim()) {
          throw std::invalid_argument("--center has the wrong dimension");
        }
        for (const double s : db_sides) {
          cubes.emplace_back(db_center, s);
        }
      }
      const auto samples = doubling_probe(*dom, cubes);
      std::ostringstream csv;
      csv << "side,ratio\n";
      for (const auto& s : samples) {
        csv << g17(s.side) << "," << g17(s.ratio) << "\n";
      }
      emit(db_out, csv.str(), out);
      return 0;
    }
    if (vf->parsed() || st->parsed()) {
      const bool study = st->parsed();
      const std::string& id = study ? st_id : vf_id;
      const auto& seed = study ? st_seed : vf_seed;
      const std::string& out_path = study ? st_out : vf_out;
      RunConfig cfg = load_config(id, study ? st_config : vf_config);
      if (study && !st_res.empty()) {
        cfg.resolutions = st_res;
      }
      materialize(cfg);
      if (!seed && id != "tres") {
        throw std::invalid_argument("--seed is required for randomized verifiers");
      }
      if (study && cfg.resolutions.size() < 2) {
        throw std::invalid_argument("a study needs at least two resolutions");
      }
      const VerificationReport rep = run_verifier(cfg, seed.value_or(0));
      const std::string report = report_to_json(rep, cfg).dump(2) + "\n";
      if (!out_path.empty()) {
        write_file_atomic(out_path + ".config.json", config_to_json(cfg).dump(2) + "\n");
      }
      if (study) {
        std::ostringstream csv;
        csv << "resolution,c_hat,runtime_s\n";
        for (std::size_t k = 0; k < rep.trend.size(); ++k) {
          csv << rep.trend[k].first << "," << g17(rep.trend[k].second) << ",";
          if (k < rep.runtime_s.size()) {
            csv << g17(rep.runtime_s[k]);
          }
          csv << "\n";
        }
        emit(out_path, csv.str(), out);
        if (!out_path.empty()) {
          write_file_atomic(out_path + ".report.json", report);
        }
      } else {
        emit(out_path, report, out);
      }
      err << id << ": " << to_string(rep.verdict) << " (max ratio " << g17(rep.max_ratio)
          << ")\n";
      return verdict_code(rep.verdict);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace varlex::cli
