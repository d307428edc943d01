#include "cwish/io.hpp"

#include "cwish/errors.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cwish::io {

namespace {

void dump_into(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::null:
      out += "null";
      return;
    case json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw InvalidInputError("cannot serialize a non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    case json::value_t::string:
      out += v.dump();
      return;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        dump_into(e, out);
      }
      out += ']';
      return;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, e] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        dump_into(e, out);
      }
      out += '}';
      return;
    }
    default:
      throw InvalidInputError("cannot serialize binary or discarded JSON values");
  }
}

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInputError(std::string(what) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

Eigen::Index positive_index(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
    throw InvalidInputError(std::string(what) + ": \"" + key + "\" must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<std::int64_t>());
}

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw InvalidInputError(std::string(what) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidInputError(std::string(what) + ": non-finite number");
  return d;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

std::string dump(const json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << text;
}

json matrix_to_json(const DenseMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

DenseMatrix matrix_from_json(const json& j) {
  const Eigen::Index rows = positive_index(j, "rows", "matrix");
  const Eigen::Index cols = positive_index(j, "cols", "matrix");
  const json& entries = require(j, "entries", "matrix");
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw InvalidInputError("matrix: \"entries\" must be an array of rows * cols numbers");
  }
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = finite_number(entries[static_cast<std::size_t>(i * cols + c)], "matrix entry");
    }
  }
  return m;
}

json shape_spec_to_json(const ShapeMatrixSpec& spec) {
  json j{{"variant", shape_variant_name(spec)}};
  if (const auto* d = std::get_if<DiagonalShape>(&spec)) {
    j["entries"] = d->entries;
  } else if (const auto* c = std::get_if<CustomShape>(&spec)) {
    j["matrix"] = matrix_to_json(c->matrix);
  }
  return j;
}

ShapeMatrixSpec shape_spec_from_json(const json& j) {
  const json& variant = require(j, "variant", "shape");
  if (!variant.is_string()) throw InvalidInputError("shape: \"variant\" must be a string");
  const std::string name = variant.get<std::string>();
  if (name == "identity") return IdentityShape{};
  if (name == "skew_block") return SkewBlockShape{};
  if (name == "diagonal") {
    const json& entries = require(j, "entries", "diagonal shape");
    if (!entries.is_array()) throw InvalidInputError("diagonal shape: \"entries\" must be an array");
    DiagonalShape d;
    for (const auto& e : entries) d.entries.push_back(finite_number(e, "diagonal entry"));
    return d;
  }
  if (name == "custom") return CustomShape{matrix_from_json(require(j, "matrix", "custom shape"))};
  throw InvalidInputError("shape: unknown variant \"" + name +
                          "\" (expected identity, diagonal, skew_block, custom)");
}

json model_to_json(const WishartModel& model) {
  return json{{"p", model.p()},
              {"n", model.n()},
              {"theta", matrix_to_json(model.theta().matrix())},
              {"shape", shape_spec_to_json(model.shape_spec())}};
}

WishartModel model_from_json(const json& j) {
  const Eigen::Index p = positive_index(j, "p", "model");
  const Eigen::Index n = positive_index(j, "n", "model");
  SpdMatrix theta = j.contains("theta") ? SpdMatrix(matrix_from_json(j.at("theta")))
                                        : SpdMatrix::identity(p);
  return WishartModel(p, n, std::move(theta), shape_spec_from_json(require(j, "shape", "model")));
}

json family_to_json(const ShapeFamily& family) {
  if (family.kind() == ShapeFamily::Kind::SeededDiagonal) {
    return json{{"variant", family.name()}, {"seed", family.seed().value}};
  }
  return family.name();
}

ShapeFamily family_from_json(const json& j) {
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object() && j.contains("variant") && j.at("variant").is_string()) {
    name = j.at("variant").get<std::string>();
  } else {
    throw InvalidInputError("family: expected a name or an object with \"variant\"");
  }
  if (name == "identity") return ShapeFamily::identity();
  if (name == "skew_block") return ShapeFamily::skew_block();
  if (name == "zero") return ShapeFamily::zero();
  if (name == "seeded_diagonal") {
    std::uint64_t seed = 0;
    if (j.is_object() && j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
        throw InvalidInputError("family: \"seed\" must be an unsigned integer");
      }
      seed = j.at("seed").get<std::uint64_t>();
    }
    return ShapeFamily::seeded_diagonal(RngSeed{seed});
  }
  throw InvalidInputError("family: unknown variant \"" + name +
                          "\" (expected identity, skew_block, seeded_diagonal, zero)");
}

json bound_report_to_json(const BoundReport& r) {
  return json{{"p", r.inputs.p},
              {"n", r.inputs.n},
              {"sigma", r.inputs.sigma},
              {"kappa", r.inputs.kappa},
              {"convention", to_string(r.convention)},
              {"log_factor", r.log_factor},
              {"theta_norm", r.inputs.theta_norm},
              {"bound_value", r.bound_value}};
}

json certificate_to_json(const NetCertificate& c) {
  return json{{"p", c.p},
              {"matrix_id", c.matrix_id},
              {"exact_norm", c.exact_norm},
              {"reg_max", c.reg_max},
              {"factor", c.factor},
              {"holds", c.holds}};
}

json stats_to_json(const DeviationStats& s) {
  return json{{"mean", s.mean}, {"stderr", s.std_error}, {"max", s.max}, {"trials", s.trials}};
}

json expectation_to_json(const ExpectationReport& r) {
  return json{{"mean", matrix_to_json(r.mean)},
              {"stderr", matrix_to_json(r.std_error)},
              {"expected", matrix_to_json(r.expected)},
              {"max_z", r.max_z}};
}

json dominance_to_json(const DominanceReport& r) {
  return json{{"empirical", stats_to_json(r.empirical)},
              {"bound", bound_report_to_json(r.bound)},
              {"ratio", r.ratio}};
}

json decoupling_to_json(const DecouplingReport& r) {
  return json{{"lhs", stats_to_json(r.lhs)}, {"rhs", stats_to_json(r.rhs)}};
}

json chaos_to_json(const ChaosReport& r) {
  return json{{"lhs", stats_to_json(r.lhs)},
              {"rhs", stats_to_json(r.rhs)},
              {"combined_stderr", r.combined_stderr}};
}

json linear_form_to_json(const LinearFormReport& r) {
  return json{{"sample_std", r.sample_std},
              {"target", r.target},
              {"upper_bound", r.upper_bound},
              {"tolerance", r.tolerance},
              {"trials", r.trials},
              {"norm_inequality_holds", r.norm_inequality_holds}};
}

json concentration_to_json(const ConcentrationCheck& c) {
  json checked = json::array();
  for (bool b : c.tail_checked) checked.push_back(b);
  return json{{"x", vector_to_json(c.x)},
              {"t_grid", c.t_grid},
              {"lipschitz", c.lipschitz},
              {"mean_bound", c.mean_bound},
              {"u_floor", c.u_floor},
              {"empirical_tails", c.empirical_tails},
              {"theoretical_tails", c.theoretical_tails},
              {"tail_checked", checked},
              {"sigma", stats_to_json(c.sigma_stats)},
              {"lipschitz_pairs", c.lipschitz_pairs},
              {"lipschitz_violations", c.lipschitz_violations},
              {"tails_hold", c.tails_hold},
              {"mean_holds", c.mean_holds}};
}

json scaling_to_json(const ScalingTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"n", r.n}, {"stats", stats_to_json(r.stats)}, {"bound", r.bound}, {"ratio", r.ratio}});
  }
  json j{{"p", t.p}, {"rows", std::move(rows)}};
  if (t.slope) {
    j["slope"] = *t.slope;
    j["degenerate"] = false;
  } else {
    j["slope"] = nullptr;
    j["degenerate"] = true;
  }
  return j;
}

std::string config_digest(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json make_report(const std::string& check_name, const json& config, RngSeed seed, json statistics,
                 bool holds) {
  return json{{"check_name", check_name},
              {"config_digest", config_digest(config)},
              {"master_seed", seed.value},
              {"statistics", std::move(statistics)},
              {"holds", holds}};
}

std::string scaling_csv(const ScalingTable& table) {
  std::string out = "p,n,mean,stderr,bound,ratio\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(table.p), static_cast<long long>(r.n), r.stats.mean,
                  r.stats.std_error, r.bound, r.ratio);
    out += buf;
  }
  return out;
}

}  // namespace cwish::io
