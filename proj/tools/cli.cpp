#include "cli.hpp"

#include "cwish/bound.hpp"
#include "cwish/errors.hpp"
#include "cwish/io.hpp"
#include "cwish/regular.hpp"
#include "cwish/verify.hpp"
#include "cwish/wishart.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace cwish::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

const std::vector<std::string> kCommands = {"sample", "bound", "verify", "netcert", "sweep"};
const std::vector<std::string> kChecks = {"expectation", "dominance",  "decoupling",
                                          "chaos",       "stddev",     "concentration"};

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  long trials = 0;
  std::string out;
  std::string convention;
  std::string format;
  std::string model;
  std::string check;
  std::string mode;
  std::vector<std::string> inputs;
  bool decoupled = false;
};

struct Options {
  CLI::Option* config = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* convention = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* model = nullptr;
  CLI::Option* check = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* inputs = nullptr;
  CLI::Option* decoupled = nullptr;
};

Options add_common(CLI::App* app, Flags& f) {
  Options o;
  o.config = app->add_option("--config", f.config, "JSON config file (flags override its fields)");
  o.seed = app->add_option("--seed", f.seed, "master seed");
  o.trials = app->add_option("--trials", f.trials, "number of trials")->check(CLI::PositiveNumber);
  o.out = app->add_option("--out", f.out, "output directory");
  o.convention = app->add_option("--convention", f.convention, "kappa convention")
                     ->check(CLI::IsMember({"frobenius", "ratio"}));
  o.format = app->add_option("--format", f.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  o.model = app->add_option("--model", f.model, "model JSON file");
  return o;
}

/// Flag values win over config-file fields.
json merged_config(const std::string& command, const Flags& f, const Options& o) {
  json cfg = json::object();
  if (o.config && o.config->count()) {
    cfg = io::read_json_file(f.config);
    if (!cfg.is_object()) throw InvalidInputError("config must be a JSON object");
  }
  if (cfg.contains("command")) {
    if (!cfg["command"].is_string()) throw InvalidInputError("config: \"command\" must be a string");
    if (command != "run" && cfg["command"].get<std::string>() != command) {
      throw InvalidInputError("config command \"" + cfg["command"].get<std::string>() +
                              "\" does not match subcommand \"" + command + "\"");
    }
  } else if (command == "run") {
    throw InvalidInputError("config: \"command\" field is required with `run`");
  }
  if (command != "run") cfg["command"] = command;
  if (o.seed && o.seed->count()) cfg["seed"] = f.seed;
  if (o.trials && o.trials->count()) cfg["trials"] = f.trials;
  if (o.out && o.out->count()) cfg["out"] = f.out;
  if (o.convention && o.convention->count()) cfg["convention"] = f.convention;
  if (o.format && o.format->count()) cfg["format"] = f.format;
  if (o.model && o.model->count()) cfg["model"] = f.model;
  if (o.check && o.check->count()) cfg["check"] = f.check;
  if (o.mode && o.mode->count()) cfg["mode"] = f.mode;
  if (o.inputs && o.inputs->count()) cfg["inputs"] = f.inputs;
  if (o.decoupled && o.decoupled->count()) cfg["decoupled"] = f.decoupled;
  return cfg;
}

RngSeed seed_of(const json& cfg) {
  if (!cfg.contains("seed")) return RngSeed{0};
  const json& s = cfg["seed"];
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
    throw InvalidInputError("config: \"seed\" must be an unsigned integer");
  }
  return RngSeed{s.get<std::uint64_t>()};
}

long trials_of(const json& cfg, long fallback) {
  if (!cfg.contains("trials")) return fallback;
  const json& t = cfg["trials"];
  if (!t.is_number_integer() || t.get<std::int64_t>() < 1) {
    throw InvalidInputError("config: \"trials\" must be a positive integer");
  }
  return static_cast<long>(t.get<std::int64_t>());
}

std::string string_of(const json& cfg, const char* key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_string()) throw InvalidInputError(std::string("config: \"") + key + "\" must be a string");
  return cfg[key].get<std::string>();
}

/// Replaces a model path by the model it names so the digest covers content.
WishartModel resolve_model(json& cfg) {
  if (!cfg.contains("model")) throw InvalidInputError("config: a model is required (--model PATH)");
  json& m = cfg["model"];
  if (m.is_string()) m = io::read_json_file(m.get<std::string>());
  WishartModel model = io::model_from_json(m);
  m = io::model_to_json(model);
  return model;
}

SpdMatrix theta_of(const json& cfg, Eigen::Index p) {
  if (!cfg.contains("theta")) return SpdMatrix::identity(p);
  SpdMatrix theta(io::matrix_from_json(cfg["theta"]));
  if (theta.dim() != p) throw DimensionError("config: theta has the wrong dimension");
  return theta;
}

Vector vector_of(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInputError(std::string("config: \"") + what + "\" must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInputError(std::string("config: \"") + what + "\" must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::vector<Eigen::Index> index_list(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_array()) {
    throw InvalidInputError(std::string("config: \"") + key + "\" must be an array of positive integers");
  }
  std::vector<Eigen::Index> out;
  for (const auto& e : cfg[key]) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1) {
      throw InvalidInputError(std::string("config: \"") + key + "\" must hold positive integers");
    }
    out.push_back(static_cast<Eigen::Index>(e.get<std::int64_t>()));
  }
  if (out.empty()) throw InvalidInputError(std::string("config: \"") + key + "\" is empty");
  return out;
}

Eigen::Index positive_of(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_number_integer() || cfg[key].get<std::int64_t>() < 1) {
    throw InvalidInputError(std::string("config: \"") + key + "\" must be a positive integer");
  }
  return static_cast<Eigen::Index>(cfg[key].get<std::int64_t>());
}

void require_json_format(const json& cfg) {
  const std::string format = string_of(cfg, "format", "json");
  if (format != "json") {
    throw InvalidInputError("--format " + format + " is only supported by sweep");
  }
}

int cmd_sample(json cfg, std::ostream& out) {
  require_json_format(cfg);
  const WishartModel model = resolve_model(cfg);
  const long trials = trials_of(cfg, 1);
  const RngSeed seed = seed_of(cfg);
  const fs::path dir = string_of(cfg, "out", ".");
  const bool decoupled = cfg.value("decoupled", false);
  fs::create_directories(dir);

  json files = json::array();
  for (long i = 0; i < trials; ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, ".%03ld", i);
    const RngSeed s = trial_seed(seed, i);
    const fs::path w_path = dir / ("W" + std::string(suffix));
    io::write_text_file(w_path, io::dump(io::matrix_to_json(sample_wishart(model, s))) + "\n");
    files.push_back(w_path.string());
    if (decoupled) {
      const fs::path wp_path = dir / ("Wprime" + std::string(suffix));
      io::write_text_file(wp_path, io::dump(io::matrix_to_json(sample_decoupled(model, s))) + "\n");
      files.push_back(wp_path.string());
    }
  }
  out << io::dump(json{{"command", "sample"},
                       {"config_digest", io::config_digest(cfg)},
                       {"master_seed", seed.value},
                       {"files", files}})
      << "\n";
  return kExitOk;
}

int cmd_bound(json cfg, std::ostream& out) {
  require_json_format(cfg);
  const KappaConvention convention = parse_kappa_convention(string_of(cfg, "convention", "frobenius"));
  BoundReport report;
  if (cfg.contains("sequence")) {
    const json& s = cfg["sequence"];
    const Eigen::Index p = positive_of(s, "p");
    WishartSequenceSpec seq{p, theta_of(s, p), index_list(s, "index_set"),
                            io::family_from_json(s.value("family", json("identity"))),
                            s.value("beta", 1.0)};
    report = corollary2_bound(seq, positive_of(cfg, "n"));
  } else {
    report = theorem1_bound(resolve_model(cfg), convention);
  }
  out << io::dump(io::bound_report_to_json(report)) << "\n";
  return kExitOk;
}

int cmd_verify(json cfg, std::ostream& out) {
  require_json_format(cfg);
  const std::string check = string_of(cfg, "check", "");
  if (std::find(kChecks.begin(), kChecks.end(), check) == kChecks.end()) {
    std::string valid;
    for (const auto& c : kChecks) valid += (valid.empty() ? "" : ", ") + c;
    throw InvalidInputError("unknown check \"" + check + "\"; valid checks: " + valid);
  }
  const RngSeed seed = seed_of(cfg);
  const ExecutionOptions exec = ExecutionOptions::from_environment();
  json stats;
  bool holds = false;

  if (check == "expectation" || check == "dominance" || check == "decoupling") {
    const WishartModel model = resolve_model(cfg);
    const TrialConfig tc{model, trials_of(cfg, kDefaultNormTrials), seed};
    if (check == "expectation") {
      const auto r = check_expectation(tc, exec);
      stats = io::expectation_to_json(r);
      holds = r.holds;
    } else if (check == "dominance") {
      const auto r = check_bound_dominance(
          tc, parse_kappa_convention(string_of(cfg, "convention", "frobenius")), exec);
      stats = io::dominance_to_json(r);
      holds = r.holds;
    } else {
      const auto r = check_wishart_decoupling(tc, exec);
      stats = io::decoupling_to_json(r);
      holds = r.holds;
    }
  } else if (check == "chaos") {
    if (!cfg.contains("matrices") || !cfg["matrices"].is_array() || cfg["matrices"].empty()) {
      throw InvalidInputError("chaos check: \"matrices\" must be a nonempty array of matrices");
    }
    std::vector<DenseMatrix> family;
    for (const auto& m : cfg["matrices"]) family.push_back(io::matrix_from_json(m));
    const auto r = check_chaos_decoupling(family, theta_of(cfg, family.front().rows()),
                                          trials_of(cfg, kDefaultScalarTrials), seed, exec);
    stats = io::chaos_to_json(r);
    holds = r.holds;
  } else if (check == "stddev") {
    if (!cfg.contains("a")) throw InvalidInputError("stddev check: \"a\" is required");
    const Vector a = vector_of(cfg["a"], "a");
    const auto r = check_linear_form_std(theta_of(cfg, a.size()), a,
                                         trials_of(cfg, kDefaultScalarTrials), seed);
    stats = io::linear_form_to_json(r);
    holds = r.holds;
  } else {  // concentration
    const WishartModel model = resolve_model(cfg);
    const long trials = trials_of(cfg, kDefaultScalarTrials);
    Vector x = Vector::Zero(model.p());
    x(0) = 1.0;
    if (cfg.contains("x")) x = vector_of(cfg["x"], "x");
    std::vector<double> t_grid;
    if (cfg.contains("t_grid")) {
      const Vector t = vector_of(cfg["t_grid"], "t_grid");
      t_grid.assign(t.data(), t.data() + t.size());
    } else {
      // Five points below the t where the theoretical tail reaches 10 / N.
      const double b = model.shape().spectral_norm();
      const double t_max = std::sqrt(2.0 * model.p() * b * b / (double(model.n()) * model.n()) *
                                     std::log(static_cast<double>(trials) / 20.0));
      for (int k = 0; k < 5; ++k) t_grid.push_back(t_max * k / 5.0);
    }
    const long pairs = cfg.value("lipschitz_pairs", 1000L);
    const auto r = check_sigma_concentration(model, x, t_grid, trials, seed, pairs, exec);
    stats = io::concentration_to_json(r);
    holds = r.holds;
  }
  out << io::dump(io::make_report(check, cfg, seed, std::move(stats), holds)) << "\n";
  return holds ? kExitOk : kExitCheckFailed;
}

int cmd_netcert(json cfg, std::ostream& out) {
  require_json_format(cfg);
  if (!cfg.contains("inputs") || !cfg["inputs"].is_array() || cfg["inputs"].empty()) {
    throw InvalidInputError("netcert: at least one input matrix file is required");
  }
  bool all_hold = true;
  for (const auto& path : cfg["inputs"]) {
    if (!path.is_string()) throw InvalidInputError("netcert: inputs must be file paths");
    const std::string id = path.get<std::string>();
    const NetCertificate cert = certify_norm_bound(io::matrix_from_json(io::read_json_file(id)), id);
    all_hold = all_hold && cert.holds;
    out << io::dump(io::certificate_to_json(cert)) << "\n";
  }
  return all_hold ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(json cfg, std::ostream& out) {
  const std::string format = string_of(cfg, "format", "json");
  const std::string mode = string_of(cfg, "mode", "scaling");
  const RngSeed seed = seed_of(cfg);
  const long trials = trials_of(cfg, kDefaultNormTrials);
  const ShapeFamily family = io::family_from_json(cfg.value("family", json("identity")));
  const ExecutionOptions exec = ExecutionOptions::from_environment();

  std::string csv;
  json summary;
  bool holds = true;
  if (mode == "scaling") {
    if (!cfg.contains("n_grid") || !cfg["n_grid"].is_array() || cfg["n_grid"].empty()) {
      throw InvalidInputError("sweep: \"n_grid\" must be a nonempty array");
    }
    const Eigen::Index p = positive_of(cfg, "p");
    const ScalingTable table =
        sweep_scaling(p, index_list(cfg, "n_grid"), family, theta_of(cfg, p), trials, seed, exec);
    csv = io::scaling_csv(table);
    summary = io::scaling_to_json(table);
    for (const auto& row : table.rows) {
      holds = holds && row.stats.mean + kInequalityMargin * row.stats.std_error <= row.bound;
    }
  } else if (mode == "complexity") {
    if (!cfg.contains("tolerance") || !cfg["tolerance"].is_number()) {
      throw InvalidInputError("sweep: \"tolerance\" must be a number");
    }
    const double tolerance = cfg["tolerance"].get<double>();
    const auto rows = empirical_sample_complexity(
        index_list(cfg, "p_grid"), tolerance, family,
        [](Eigen::Index p) { return SpdMatrix::identity(p); }, trials, seed, exec);
    csv = "p,n,mean,stderr,bound,ratio\n";
    json table = json::array();
    for (const auto& r : rows) {
      const WishartModel model(r.p, r.empirical_n, SpdMatrix::identity(r.p), family.spec_for(r.empirical_n));
      const double bound = theorem1_bound(model).bound_value;
      char line[256];
      std::snprintf(line, sizeof line, "%lld,%lld,%.17g,%.17g,%.17g,%.17g\n",
                    static_cast<long long>(r.p), static_cast<long long>(r.empirical_n),
                    r.stats_at_n.mean, r.stats_at_n.std_error, bound,
                    r.stats_at_n.mean == 0.0 ? 0.0 : r.stats_at_n.mean / bound);
      csv += line;
      json row{{"p", r.p}, {"empirical_n", r.empirical_n}, {"stats", io::stats_to_json(r.stats_at_n)}};
      row["theoretical_n"] = r.theoretical_n ? json(*r.theoretical_n) : json(nullptr);
      if (r.theoretical_n && *r.theoretical_n < r.empirical_n) holds = false;
      table.push_back(std::move(row));
    }
    summary = json{{"tolerance", tolerance}, {"rows", std::move(table)}};
  } else {
    throw InvalidInputError("sweep: unknown mode \"" + mode + "\" (expected scaling or complexity)");
  }

  const json report = io::make_report("sweep_" + mode, cfg, seed, summary, holds);
  if (cfg.contains("out")) {
    const fs::path dir = string_of(cfg, "out", ".");
    fs::create_directories(dir);
    io::write_text_file(dir / "sweep.csv", csv);
    io::write_text_file(dir / "summary.json", io::dump(report) + "\n");
  }
  if (format == "csv") {
    out << csv;
  } else {
    out << io::dump(report) << "\n";
  }
  return holds ? kExitOk : kExitCheckFailed;
}

int dispatch(const json& cfg, std::ostream& out) {
  const std::string command = cfg.at("command").get<std::string>();
  if (command == "sample") return cmd_sample(cfg, out);
  if (command == "bound") return cmd_bound(cfg, out);
  if (command == "verify") return cmd_verify(cfg, out);
  if (command == "netcert") return cmd_netcert(cfg, out);
  if (command == "sweep") return cmd_sweep(cfg, out);
  throw InvalidInputError("unknown command \"" + command + "\"");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compound Wishart simulation, deviation bounds and verification checks", "wishart"};
  app.require_subcommand(1, 1);

  Flags flags;
  std::vector<std::pair<CLI::App*, Options>> subs;
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    Options o = add_common(sub, flags);
    if (name == "verify") {
      o.check = sub->add_option("--check", flags.check, "check name");
    } else if (name == "sweep") {
      o.mode = sub->add_option("--mode", flags.mode, "scaling or complexity");
    } else if (name == "sample") {
      o.decoupled = sub->add_flag("--decoupled", flags.decoupled, "also write decoupled W' files");
    } else if (name == "netcert") {
      o.inputs = sub->add_option("inputs", flags.inputs, "matrix JSON files");
    }
    subs.emplace_back(sub, o);
  }
  CLI::App* run_sub = app.add_subcommand("run", "run the command named in --config");
  subs.emplace_back(run_sub, add_common(run_sub, flags));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    for (auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      const json cfg = merged_config(sub->get_name(), flags, opts);
      return dispatch(cfg, out);
    }
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace cwish::cli
