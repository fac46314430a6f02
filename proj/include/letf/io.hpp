#pragma once
// CSV and JSON serialization of simulation, estimation and empirical results.
// Output is deterministic: doubles are printed in shortest round-trip form and
// non-finite values become "nan" in CSV and null in JSON.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "letf/core.hpp"
#include "letf/empirical.hpp"
#include "letf/estimation.hpp"
#include "letf/sim/models.hpp"
#include "letf/sim/simulate.hpp"

namespace letf::io {

using Json = nlohmann::ordered_json;

/// Round-trip decimal text for a double ("nan", "inf", "-inf" otherwise).
std::string format_double(double x);

/// Absent-cell marker in CE tables.
inline constexpr const char* kAbsent = "---";

/// One row per path, one column per step.
void write_paths_csv(std::ostream& out, const sim::PathBatch& batch);
/// Shape, seed and pooled moments of a batch, without the paths.
Json paths_summary(const sim::PathBatch& batch);

/// Summary statistics of a Monte Carlo CE run; per-path values are omitted.
Json to_json(const sim::CEReport& report);

/// {"model", "scale", "params", "std_errors", "loglik", "n_obs", "converged", ...}
Json to_json(const est::GarchFit& fit);
Json to_json(const est::Ar1Fit& fit);

/// regime,start,end,mode,<mode>_beta_<b>... with "---" for absent cells.
void write_ce_table_csv(std::ostream& out, const emp::CETable& table);
/// date,value (index,value for undated series).
void write_rolling_csv(std::ostream& out, std::span<const RollingPoint> points);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

/// Writes `text` to `path`, creating parent directories. Throws config error
/// "output-unwritable".
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace letf::io
