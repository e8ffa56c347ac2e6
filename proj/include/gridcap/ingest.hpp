#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridcap/core.hpp"

// Parsing and harmonization of heterogeneous operator headroom files and
// industrial demand files into the canonical dataset. Each distribution
// network operator (DNO) publishes its development plan in its own shape;
// a per-operator profile declares how to make it consistent: unit handling
// (MVA vs MW), calendar-year remapping, scenario label remapping, seasonal
// record selection and constituent-file grouping.

namespace gridcap {

enum class Dno { ENW, NPG, SPM_SPD, SEPD_SHEPD, UKPN, NGED };

std::string_view to_label(Dno dno);
std::optional<Dno> parse_dno(std::string_view text);

enum class UnitRule {
    AlreadyMw,         // values arrive as active power in MW
    ConvertMvaWithPf,  // values arrive as apparent power in MVA
};

enum class SeasonRule {
    None,        // one record per (substation, year, scenario)
    TakeWinter,  // seasonal records; the winter one is taken forward
};

struct DnoProfile {
    Dno dno = Dno::ENW;
    UnitRule unit_rule = UnitRule::AlreadyMw;
    // Raw calendar year -> study year. Raw years without an entry are
    // skipped (development plans carry years this study does not use).
    std::map<int, HorizonYear> year_map;
    // Raw scenario label -> canonical scenario. Unknown labels are errors.
    std::map<std::string, NetworkScenario> scenario_map;
    SeasonRule season_rule = SeasonRule::None;
    // Constituent data files; more than one means they are merged.
    std::vector<std::filesystem::path> files;
    // Optional logical-field -> actual-column-name remapping for this
    // operator's files. Unmapped fields use the logical name directly.
    std::map<std::string, std::string> columns;
};

// Loads the profile configuration document (JSON). File paths are resolved
// relative to the document's directory. Throws ConfigError.
std::vector<DnoProfile> load_profiles(const std::filesystem::path& path);

// One parsed row of an operator headroom file, before harmonization.
struct RawHeadroomRecord {
    std::string substation_id;
    Dno dno = Dno::ENW;
    Region region = Region::NorthEast;
    double lat = 0.0;
    double lon = 0.0;
    double voltage_kv = 0.0;
    int raw_year = 0;
    std::string raw_scenario;
    std::string raw_season;  // empty when the operator has no seasons
    double magnitude = 0.0;
    std::string unit;  // "MW" or "MVA"
};

enum class DiagnosticSeverity {
    Skip,    // expected drop (e.g. a year outside the study horizon)
    Reject,  // record or substation excluded with a reason
    Fatal,   // data error; ingest exits nonzero
};

std::string_view to_label(DiagnosticSeverity severity);

struct Diagnostic {
    std::string file;
    int row = 0;  // 1-based source line; 0 for file-level problems
    DiagnosticSeverity severity = DiagnosticSeverity::Skip;
    std::string reason;
};

struct Diagnostics {
    std::vector<Diagnostic> entries;

    void add(std::string file, int row, DiagnosticSeverity severity, std::string reason);
    int count(DiagnosticSeverity severity) const;
    bool has_fatal() const { return count(DiagnosticSeverity::Fatal) > 0; }
    void merge(Diagnostics other);
};

void write_diagnostics(const std::filesystem::path& path, const Diagnostics& diagnostics);

struct IngestOptions {
    double power_factor = 0.9;  // MVA -> MW conversion
    double load_factor = 0.9;   // annual MWh -> MW conversion
};

// Apparent power (MVA) to active power (MW), sign-preserving. The power
// factor must lie in (0, 1].
double mva_to_mw(double apparent_mva, double power_factor);

// Annual energy (MWh) to required connection capacity (MW) at the given
// load factor: e / (8760 * lf). Energy must be non-negative.
double annual_energy_to_capacity_mw(double energy_mwh, double load_factor);

// Raw calendar year to study year per the profile; nullopt means the row
// is skipped (with a logged count), not an error.
std::optional<HorizonYear> remap_year(int raw_year, const DnoProfile& profile);

// Raw scenario label to canonical scenario; nullopt means the label is
// unknown to the profile (an ingest error at the call site).
std::optional<NetworkScenario> remap_scenario(const std::string& raw_label,
                                              const DnoProfile& profile);

struct SeasonCandidate {
    std::string season;
    double value_mw = 0.0;
    std::string file;
    int row = 0;
};

struct SeasonSelection {
    std::optional<std::size_t> index;  // into the candidate vector
    std::string error;                 // set when no unique record exists
};

// Reduces the records sharing one (substation, year, scenario) cell to a
// single record: the winter one under TakeWinter, the only one otherwise.
SeasonSelection select_season(const std::vector<SeasonCandidate>& candidates,
                              const DnoProfile& profile);

struct HeadroomIngestResult {
    std::vector<Substation> substations;  // sorted by id
    Diagnostics diagnostics;
    int skipped_year_rows = 0;
};

// Parses and harmonizes every file of every profile. Substations missing
// any (year, scenario) cell are rejected with a diagnostic rather than
// interpolated. Data errors become Fatal diagnostics; the caller decides
// whether to abort (the CLI exits nonzero when any exist).
HeadroomIngestResult ingest_headroom(const std::vector<DnoProfile>& profiles,
                                     const IngestOptions& options);

struct SiteIngestResult {
    std::vector<PointSite> sites;                  // sorted by id
    std::vector<RegionalNonPointDemand> nonpoint;  // sorted by (region, sector)
    Diagnostics diagnostics;
};

// Reads the point-site and regional non-point demand files, converts annual
// energy to capacity at the configured load factor and re-bases every need
// against the 2024 baseline.
SiteIngestResult ingest_sites(const std::filesystem::path& point_file,
                              const std::filesystem::path& nonpoint_file,
                              const IngestOptions& options);

// Canonical dataset files: the only inputs the downstream stages read.
void write_canonical_substations(const std::filesystem::path& path,
                                 const std::vector<Substation>& substations);
void write_canonical_sites(const std::filesystem::path& path,
                           const std::vector<PointSite>& sites,
                           const std::vector<RegionalNonPointDemand>& nonpoint);
std::vector<Substation> read_canonical_substations(const std::filesystem::path& path);
void read_canonical_sites(const std::filesystem::path& path, std::vector<PointSite>& sites,
                          std::vector<RegionalNonPointDemand>& nonpoint);

}  // namespace gridcap
