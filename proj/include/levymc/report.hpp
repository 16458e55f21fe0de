#pragma once

#include <string>
#include <vector>

#include "levymc/estimator.hpp"

namespace levymc {

inline constexpr const char* kSchemaLine = "# schema=1";
inline constexpr const char* kCsvHeader =
    "gamma_or_n,estimate,stderr,bias_bound,paths,mean_skeleton_points,depth_breaches,"
    "wall_seconds,seed";

/// One CSV row in schema 1; reals use 17 significant digits, NaN prints as "nan".
std::string csv_row(const McResult& r);

/// Sweep footer: "slope,<slope>" padded to the schema width.
std::string csv_slope_row(double slope);

/// JSON object with the CSV field names (NaN becomes null).
std::string json_result(const McResult& r);
std::string json_sweep(const SweepResult& sweep);

/// Writes `content` to a temporary file next to `path` and renames it over
/// `path`. Throws std::runtime_error on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

/// Appends rows to a schema-1 CSV file, creating it with the schema line and
/// header when missing or empty. The whole file is rewritten atomically.
/// Throws DomainError when an existing file carries a different header.
void append_csv(const std::string& path, const std::vector<std::string>& rows);

/// Checks before any work that `path` can receive results: its directory
/// exists and, for CSV, an existing non-empty file has the schema-1 header.
/// Throws DomainError otherwise.
void check_output_target(const std::string& path, bool csv);

/// Schema line, header and rows as one string.
std::string csv_document(const std::vector<std::string>& rows);

}  // namespace levymc
