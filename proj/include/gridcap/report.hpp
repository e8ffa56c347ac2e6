#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gridcap/analysis.hpp"
#include "gridcap/config.hpp"

// Result-set serialization (one directory per run, delimited files plus a
// checksummed manifest) and the report stage that renders summary tables,
// the sensitivity comparison and per-cell geographic feature files from a
// result directory.

namespace gridcap {

// FNV-1a, 64-bit. Stable across platforms; used for manifest checksums.
std::uint64_t fnv1a64(std::string_view bytes);
std::string checksum_hex(std::string_view bytes);
std::string file_checksum(const std::filesystem::path& path);  // throws Error

// Writes the full result set under `dir`:
//   manifest.txt                 config echo, dataset checksums, cell list,
//                                one checksum line per output file
//   gb_summaries.csv             one row per cell
//   regional_balances.csv        one row per (cell, region)
//   emissions_at_risk.csv        one row per cell
//   sector_shares.csv            one row per (cell, sector)
//   location_split.csv           one row per cell
//   static/substations.csv       cell-invariant substation attributes
//   static/sites.csv             site attributes, nearest substation,
//                                distance and location class
//   cells/<tag>/outcomes.csv     per-site allocation outcome
//   cells/<tag>/ledgers.csv      per-substation headroom ledger
// Output is byte-deterministic for fixed inputs and config; the
// parallelism degree is deliberately not echoed.
void write_results(const std::filesystem::path& dir, const MatrixResult& matrix,
                   const Dataset& data, const RunConfig& config);

enum class ReportFormat { Csv, Markdown };

std::optional<ReportFormat> parse_format(std::string_view text);

// Renders summary artifacts from a result directory into <dir>/report:
// summary tables (constrained shares, reason counts, shortfalls,
// emissions-at-risk, sector shares, location split), the cross-pathway
// sensitivity table, one geographic feature file per cell under
// report/geo/, and a manifest. Verifies the run manifest checksums first
// and reconciles summary totals against the per-cell outcome files;
// any mismatch is a ReportError.
void write_report(const std::filesystem::path& results_dir, ReportFormat format);

}  // namespace gridcap
