#pragma once

#include "cwish/bound.hpp"
#include "cwish/regular.hpp"
#include "cwish/verify.hpp"
#include "cwish/wishart.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace cwish::io {

using json = nlohmann::json;

/// Compact JSON text; every floating-point value printed with 17 significant
/// digits. Throws InvalidInputError on NaN or infinity.
std::string dump(const json& value);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"rows": r, "cols": c, "entries": [row-major]}.
json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const json& j);

json shape_spec_to_json(const ShapeMatrixSpec& spec);
ShapeMatrixSpec shape_spec_from_json(const json& j);

/// {"p", "n", "theta": matrix, "shape": {"variant", ...}}.
json model_to_json(const WishartModel& model);
WishartModel model_from_json(const json& j);

/// "identity", "skew_block", "zero", or {"variant": "seeded_diagonal", "seed": s}.
json family_to_json(const ShapeFamily& family);
ShapeFamily family_from_json(const json& j);

json bound_report_to_json(const BoundReport& report);
json certificate_to_json(const NetCertificate& cert);
json stats_to_json(const DeviationStats& stats);

json expectation_to_json(const ExpectationReport& r);
json dominance_to_json(const DominanceReport& r);
json decoupling_to_json(const DecouplingReport& r);
json chaos_to_json(const ChaosReport& r);
json linear_form_to_json(const LinearFormReport& r);
json concentration_to_json(const ConcentrationCheck& r);
json scaling_to_json(const ScalingTable& t);

/// Hex FNV-1a 64 of dump(config).
std::string config_digest(const json& config);

/// {"check_name", "config_digest", "master_seed", "statistics", "holds"}.
json make_report(const std::string& check_name, const json& config, RngSeed seed,
                 json statistics, bool holds);

/// Header "p,n,mean,stderr,bound,ratio" plus one row per table row.
std::string scaling_csv(const ScalingTable& table);

}  // namespace cwish::io
