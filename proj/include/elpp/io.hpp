#pragma once

// File formats.
//
// Every floating-point number is written as a decimal with 17 significant
// digits, which reads back to the identical double. Non-finite values are
// written as null in JSON and as inf/nan in CSV.

#include <string>

#include <json.hpp>

#include "elpp/environment.hpp"
#include "elpp/experiments.hpp"
#include "elpp/lpp_solver.hpp"
#include "elpp/variational.hpp"
#include "elpp/volume.hpp"

namespace elpp {

inline constexpr const char* kVersion = "0.1.0";

std::string format_double(double v);

/// Compact JSON with 17-significant-digit floats and sorted keys.
std::string dump_json(const json& j);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// {kind, box:{mode,t_max,x_max}, alpha, seed:{master,stream}, method,
///  entries:[[w,t,x],...]}
json environment_to_json(const Environment& env);
/// Parses and validates; malformed documents raise ContractViolation.
Environment environment_from_json(const json& j);
Environment read_environment(const std::string& path);
void write_environment(const std::string& path, const Environment& env);

/// {value, witness:[[t,x],...], B, entropy_of_witness}
json lpp_to_json(const ElppResult& r, double budget);
/// {value, argmax:[[w,t,x],...], beta, ell}
json variational_to_json(const VariationalResult& r, const Environment& env);
/// Header beta,value,argmax_size and one row per beta.
std::string sweep_csv(const BetaSweep& sweep);

std::string volume_csv_header();
std::string volume_csv_row(const VolumeEstimate& v);

json to_json(const SummaryStats& s);

/// {version, generator_id, master_seed, experiment, params}
json experiment_metadata(const ExperimentResult& r);
/// Metadata line, then one record per line in replica order.
std::string records_jsonl(const ExperimentResult& r);
/// "# <metadata>" line, header, one row per summarized quantity.
std::string summary_csv(const ExperimentResult& r);
/// Metadata, stats rows and the experiment summary in one document.
json summary_json(const ExperimentResult& r);

/// Inverse of records_jsonl; stats and summary are recomputed from the records.
ExperimentResult parse_records_jsonl(const std::string& text);

}  // namespace elpp
