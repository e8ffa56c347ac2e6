#include "gridcap/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gridcap/csv.hpp"

namespace gridcap {

namespace {

using nlohmann::json;

std::string upper(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool is_winter(std::string_view season) {
    std::string s = upper(season);
    return s == "WINTER";
}

}  // namespace

std::string_view to_label(Dno dno) {
    switch (dno) {
        case Dno::ENW: return "ENW";
        case Dno::NPG: return "NPG";
        case Dno::SPM_SPD: return "SPM_SPD";
        case Dno::SEPD_SHEPD: return "SEPD_SHEPD";
        case Dno::UKPN: return "UKPN";
        case Dno::NGED: return "NGED";
    }
    throw Error("invalid Dno");
}

std::optional<Dno> parse_dno(std::string_view text) {
    const std::string key = upper(text);
    for (Dno d : {Dno::ENW, Dno::NPG, Dno::SPM_SPD, Dno::SEPD_SHEPD, Dno::UKPN, Dno::NGED}) {
        if (key == to_label(d)) return d;
    }
    return std::nullopt;
}

std::string_view to_label(DiagnosticSeverity severity) {
    switch (severity) {
        case DiagnosticSeverity::Skip: return "skip";
        case DiagnosticSeverity::Reject: return "reject";
        case DiagnosticSeverity::Fatal: return "fatal";
    }
    throw Error("invalid DiagnosticSeverity");
}

void Diagnostics::add(std::string file, int row, DiagnosticSeverity severity,
                      std::string reason) {
    entries.push_back(Diagnostic{std::move(file), row, severity, std::move(reason)});
}

int Diagnostics::count(DiagnosticSeverity severity) const {
    int n = 0;
    for (const Diagnostic& d : entries) {
        if (d.severity == severity) ++n;
    }
    return n;
}

void Diagnostics::merge(Diagnostics other) {
    for (Diagnostic& d : other.entries) entries.push_back(std::move(d));
}

void write_diagnostics(const std::filesystem::path& path, const Diagnostics& diagnostics) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(diagnostics.entries.size());
    for (const Diagnostic& d : diagnostics.entries) {
        rows.push_back({d.file, std::to_string(d.row), std::string(to_label(d.severity)),
                        d.reason});
    }
    csv::write_file(path, {"file", "row", "severity", "reason"}, rows);
}

double mva_to_mw(double apparent_mva, double power_factor) {
    if (!(power_factor > 0.0 && power_factor <= 1.0)) {
        throw std::invalid_argument("power factor must be in (0, 1], got " +
                                    std::to_string(power_factor));
    }
    if (!std::isfinite(apparent_mva)) {
        throw std::invalid_argument("apparent power must be finite");
    }
    return apparent_mva * power_factor;
}

double annual_energy_to_capacity_mw(double energy_mwh, double load_factor) {
    if (!(load_factor > 0.0 && load_factor <= 1.0)) {
        throw std::invalid_argument("load factor must be in (0, 1], got " +
                                    std::to_string(load_factor));
    }
    if (!std::isfinite(energy_mwh) || energy_mwh < 0.0) {
        throw std::invalid_argument("annual energy must be finite and non-negative");
    }
    return energy_mwh / (8760.0 * load_factor);
}

std::optional<HorizonYear> remap_year(int raw_year, const DnoProfile& profile) {
    const auto it = profile.year_map.find(raw_year);
    if (it == profile.year_map.end()) return std::nullopt;
    return it->second;
}

std::optional<NetworkScenario> remap_scenario(const std::string& raw_label,
                                              const DnoProfile& profile) {
    const auto it = profile.scenario_map.find(raw_label);
    if (it == profile.scenario_map.end()) return std::nullopt;
    return it->second;
}

SeasonSelection select_season(const std::vector<SeasonCandidate>& candidates,
                              const DnoProfile& profile) {
    if (candidates.empty()) return {std::nullopt, "no records for cell"};

    if (profile.season_rule == SeasonRule::TakeWinter) {
        std::optional<std::size_t> winter;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!is_winter(candidates[i].season)) continue;
            if (winter) return {std::nullopt, "duplicate winter records for cell"};
            winter = i;
        }
        if (!winter) return {std::nullopt, "no winter record for cell"};
        return {winter, ""};
    }

    if (candidates.size() > 1) return {std::nullopt, "duplicate records for cell"};
    return {std::size_t{0}, ""};
}

// ---------------------------------------------------------------------------
// Profile configuration
// ---------------------------------------------------------------------------

std::vector<DnoProfile> load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile configuration: " + path.string());

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("profile configuration " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("profiles") || !doc["profiles"].is_array()) {
        throw ConfigError("profile configuration " + path.string() +
                          ": expected an object with a 'profiles' array");
    }

    const std::filesystem::path base = path.parent_path();
    std::vector<DnoProfile> profiles;
    std::set<Dno> seen;

    for (const json& entry : doc["profiles"]) {
        DnoProfile p;
        const std::string dno_text = entry.value("dno", "");
        const auto dno = parse_dno(dno_text);
        if (!dno) throw ConfigError("unknown DNO '" + dno_text + "' in profile configuration");
        p.dno = *dno;
        if (!seen.insert(*dno).second) {
            throw ConfigError("duplicate profile for DNO " + std::string(to_label(*dno)));
        }

        const std::string unit_rule = entry.value("unit_rule", "");
        if (unit_rule == "already_mw") p.unit_rule = UnitRule::AlreadyMw;
        else if (unit_rule == "convert_mva") p.unit_rule = UnitRule::ConvertMvaWithPf;
        else {
            throw ConfigError("profile " + std::string(to_label(*dno)) + ": unit_rule must be "
                              "'already_mw' or 'convert_mva', got '" + unit_rule + "'");
        }

        if (!entry.contains("year_map") || !entry["year_map"].is_object()) {
            throw ConfigError("profile " + std::string(to_label(*dno)) + ": missing year_map");
        }
        for (const auto& [raw, mapped] : entry["year_map"].items()) {
            int raw_year = 0;
            try {
                raw_year = std::stoi(raw);
            } catch (const std::exception&) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": year_map key '" + raw + "' is not a year");
            }
            if (!mapped.is_number_integer()) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": year_map values must be integer study years");
            }
            const auto horizon = horizon_from_year(mapped.get<int>());
            if (!horizon) {
                throw ConfigError("profile " + std::string(to_label(*dno)) + ": year_map value " +
                                  std::to_string(mapped.get<int>()) +
                                  " is not a study year (2024/2030/2040/2050)");
            }
            p.year_map[raw_year] = *horizon;
        }

        if (!entry.contains("scenario_map") || !entry["scenario_map"].is_object()) {
            throw ConfigError("profile " + std::string(to_label(*dno)) +
                              ": missing scenario_map");
        }
        for (const auto& [raw, mapped] : entry["scenario_map"].items()) {
            if (!mapped.is_string()) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": scenario_map values must be scenario names");
            }
            const auto scenario = parse_scenario(mapped.get<std::string>());
            if (!scenario) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": unknown scenario '" + mapped.get<std::string>() + "'");
            }
            p.scenario_map[raw] = *scenario;
        }

        const std::string season_rule = entry.value("season_rule", "none");
        if (season_rule == "none") p.season_rule = SeasonRule::None;
        else if (season_rule == "take_winter") p.season_rule = SeasonRule::TakeWinter;
        else {
            throw ConfigError("profile " + std::string(to_label(*dno)) + ": season_rule must be "
                              "'none' or 'take_winter', got '" + season_rule + "'");
        }

        if (!entry.contains("files") || !entry["files"].is_array() || entry["files"].empty()) {
            throw ConfigError("profile " + std::string(to_label(*dno)) +
                              ": 'files' must be a non-empty array");
        }
        for (const json& f : entry["files"]) {
            if (!f.is_string()) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": file entries must be strings");
            }
            std::filesystem::path fp = f.get<std::string>();
            if (fp.is_relative()) fp = base / fp;
            p.files.push_back(std::move(fp));
        }

        if (entry.contains("columns")) {
            if (!entry["columns"].is_object()) {
                throw ConfigError("profile " + std::string(to_label(*dno)) +
                                  ": 'columns' must be an object");
            }
            for (const auto& [logical, actual] : entry["columns"].items()) {
                if (!actual.is_string()) {
                    throw ConfigError("profile " + std::string(to_label(*dno)) +
                                      ": column names must be strings");
                }
                p.columns[logical] = actual.get<std::string>();
            }
        }

        profiles.push_back(std::move(p));
    }
    if (profiles.empty()) throw ConfigError("profile configuration declares no profiles");
    return profiles;
}

// ---------------------------------------------------------------------------
// Headroom ingest
// ---------------------------------------------------------------------------

namespace {

// Per-substation accumulation state while files are being read.
struct SubstationAccumulator {
    Dno dno = Dno::ENW;
    Region region = Region::NorthEast;
    double lat = 0.0;
    double lon = 0.0;
    double voltage_kv = 0.0;
    std::string first_file;
    int first_row = 0;
    // HeadroomTable cell index -> candidate records (pre season selection).
    std::map<int, std::vector<SeasonCandidate>> cells;
};

struct ColumnSet {
    int substation_id = -1;
    int region = -1;
    int lat = -1;
    int lon = -1;
    int voltage_kv = -1;
    int year = -1;
    int scenario = -1;
    int season = -1;  // optional unless the profile takes winter
    int value = -1;
    int unit = -1;
};

std::string actual_column(const DnoProfile& profile, const std::string& logical) {
    const auto it = profile.columns.find(logical);
    return it == profile.columns.end() ? logical : it->second;
}

std::optional<ColumnSet> resolve_columns(const csv::Table& table, const DnoProfile& profile,
                                         const std::string& file, Diagnostics& diags) {
    ColumnSet cols;
    bool ok = true;
    const auto need = [&](const std::string& logical, int& slot, bool required) {
        const std::string name = actual_column(profile, logical);
        slot = table.column(name);
        if (slot < 0 && required) {
            diags.add(file, 0, DiagnosticSeverity::Fatal,
                      "schema mismatch: missing column '" + name + "'");
            ok = false;
        }
    };
    need("substation_id", cols.substation_id, true);
    need("region", cols.region, true);
    need("lat", cols.lat, true);
    need("lon", cols.lon, true);
    need("voltage_kv", cols.voltage_kv, true);
    need("year", cols.year, true);
    need("scenario", cols.scenario, true);
    need("season", cols.season, profile.season_rule == SeasonRule::TakeWinter);
    need("value", cols.value, true);
    need("unit", cols.unit, true);
    if (!ok) return std::nullopt;
    return cols;
}

// Parses and validates one raw row. Writes a diagnostic and returns nullopt
// when the row cannot be used.
std::optional<RawHeadroomRecord> parse_headroom_row(const std::vector<std::string>& fields,
                                                    const ColumnSet& cols,
                                                    const DnoProfile& profile,
                                                    const std::string& file, int line,
                                                    Diagnostics& diags) {
    const auto fatal = [&](const std::string& reason) {
        diags.add(file, line, DiagnosticSeverity::Fatal, reason);
        return std::nullopt;
    };

    RawHeadroomRecord rec;
    rec.dno = profile.dno;
    rec.substation_id = fields[static_cast<std::size_t>(cols.substation_id)];
    if (rec.substation_id.empty()) return fatal("empty substation id");

    const std::string& region_text = fields[static_cast<std::size_t>(cols.region)];
    const auto region = parse_region(region_text);
    if (!region) return fatal("unknown region '" + region_text + "'");
    rec.region = *region;

    try {
        rec.lat = csv::parse_double(fields[static_cast<std::size_t>(cols.lat)]);
        rec.lon = csv::parse_double(fields[static_cast<std::size_t>(cols.lon)]);
        rec.voltage_kv = csv::parse_double(fields[static_cast<std::size_t>(cols.voltage_kv)]);
        rec.magnitude = csv::parse_double(fields[static_cast<std::size_t>(cols.value)]);
    } catch (const std::invalid_argument& e) {
        return fatal(e.what());
    }
    if (!std::isfinite(rec.magnitude)) return fatal("non-finite headroom value");
    if (rec.lat < -90.0 || rec.lat > 90.0 || !std::isfinite(rec.lat)) {
        return fatal("latitude " + fields[static_cast<std::size_t>(cols.lat)] +
                     " outside [-90, 90]");
    }
    if (rec.lon < -180.0 || rec.lon > 180.0 || !std::isfinite(rec.lon)) {
        return fatal("longitude " + fields[static_cast<std::size_t>(cols.lon)] +
                     " outside [-180, 180]");
    }

    try {
        const std::string& year_text = fields[static_cast<std::size_t>(cols.year)];
        std::size_t used = 0;
        rec.raw_year = std::stoi(year_text, &used);
        if (used != year_text.size()) return fatal("invalid year '" + year_text + "'");
    } catch (const std::exception&) {
        return fatal("invalid year '" + fields[static_cast<std::size_t>(cols.year)] + "'");
    }

    rec.raw_scenario = fields[static_cast<std::size_t>(cols.scenario)];
    if (cols.season >= 0) rec.raw_season = fields[static_cast<std::size_t>(cols.season)];

    const std::string unit = upper(fields[static_cast<std::size_t>(cols.unit)]);
    if (unit != "MW" && unit != "MVA") {
        return fatal("unknown unit tag '" + fields[static_cast<std::size_t>(cols.unit)] +
                     "' (expected MW or MVA)");
    }
    rec.unit = unit;
    return rec;
}

}  // namespace

HeadroomIngestResult ingest_headroom(const std::vector<DnoProfile>& profiles,
                                     const IngestOptions& options) {
    HeadroomIngestResult result;
    Diagnostics& diags = result.diagnostics;

    // Keyed by substation id across all profiles so cross-operator id
    // collisions are caught.
    std::map<std::string, SubstationAccumulator> accum;

    for (const DnoProfile& profile : profiles) {
        for (const std::filesystem::path& fp : profile.files) {
            const std::string file = fp.string();
            csv::Table table;
            try {
                table = csv::read_file(fp);
            } catch (const Error& e) {
                diags.add(file, 0, DiagnosticSeverity::Fatal, e.what());
                continue;
            }
            const auto cols = resolve_columns(table, profile, file, diags);
            if (!cols) continue;

            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                const int line = csv::Table::line_of_row(i);
                const std::vector<std::string>& fields = table.rows[i];
                if (fields.size() != table.header.size()) {
                    diags.add(file, line, DiagnosticSeverity::Fatal,
                              "row has " + std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
                    continue;
                }
                const auto rec = parse_headroom_row(fields, *cols, profile, file, line, diags);
                if (!rec) continue;

                if (rec->voltage_kv > 66.0) {
                    diags.add(file, line, DiagnosticSeverity::Reject,
                              "substation voltage " + csv::format_exact(rec->voltage_kv) +
                                  " kV above the 66 kV study scope");
                    continue;
                }

                // Unit harmonization is not idempotent; a tag that disagrees
                // with the profile rule means the data is not what the
                // profile was written for.
                if (profile.unit_rule == UnitRule::ConvertMvaWithPf && rec->unit == "MW") {
                    diags.add(file, line, DiagnosticSeverity::Fatal,
                              "unit tag MW under a convert_mva profile; refusing to convert "
                              "an already-canonical value");
                    continue;
                }
                if (profile.unit_rule == UnitRule::AlreadyMw && rec->unit == "MVA") {
                    diags.add(file, line, DiagnosticSeverity::Fatal,
                              "unit tag MVA under an already_mw profile");
                    continue;
                }

                const auto year = remap_year(rec->raw_year, profile);
                if (!year) {
                    diags.add(file, line, DiagnosticSeverity::Skip,
                              "year " + std::to_string(rec->raw_year) +
                                  " outside the study horizon");
                    ++result.skipped_year_rows;
                    continue;
                }
                const auto scenario = remap_scenario(rec->raw_scenario, profile);
                if (!scenario) {
                    diags.add(file, line, DiagnosticSeverity::Fatal,
                              "unknown scenario label '" + rec->raw_scenario + "'");
                    continue;
                }

                const double value_mw = profile.unit_rule == UnitRule::ConvertMvaWithPf
                                            ? mva_to_mw(rec->magnitude, options.power_factor)
                                            : rec->magnitude;

                auto [it, inserted] = accum.try_emplace(rec->substation_id);
                SubstationAccumulator& acc = it->second;
                if (inserted) {
                    acc.dno = rec->dno;
                    acc.region = rec->region;
                    acc.lat = rec->lat;
                    acc.lon = rec->lon;
                    acc.voltage_kv = rec->voltage_kv;
                    acc.first_file = file;
                    acc.first_row = line;
                } else {
                    if (acc.dno != rec->dno) {
                        diags.add(file, line, DiagnosticSeverity::Fatal,
                                  "substation id '" + rec->substation_id +
                                      "' appears under two operators (" +
                                      std::string(to_label(acc.dno)) + " and " +
                                      std::string(to_label(rec->dno)) + ")");
                        continue;
                    }
                    if (acc.lat != rec->lat || acc.lon != rec->lon ||
                        acc.region != rec->region || acc.voltage_kv != rec->voltage_kv) {
                        diags.add(file, line, DiagnosticSeverity::Fatal,
                                  "substation '" + rec->substation_id +
                                      "' has inconsistent attributes across records");
                        continue;
                    }
                }
                acc.cells[HeadroomTable::index(*year, *scenario)].push_back(
                    SeasonCandidate{rec->raw_season, value_mw, file, line});
            }
        }
    }

    // Season selection and completeness across the accumulated cells.
    const auto profile_of = [&](Dno dno) -> const DnoProfile& {
        for (const DnoProfile& p : profiles) {
            if (p.dno == dno) return p;
        }
        throw Error("no profile for DNO");  // unreachable: records come from profiles
    };

    for (const auto& [id, acc] : accum) {
        const DnoProfile& profile = profile_of(acc.dno);
        HeadroomTable table;
        bool usable = true;
        std::vector<std::string> missing;

        for (HorizonYear y : all_years()) {
            for (NetworkScenario s : all_scenarios()) {
                const auto cell_it = acc.cells.find(HeadroomTable::index(y, s));
                if (cell_it == acc.cells.end()) {
                    missing.push_back(std::to_string(year_value(y)) + "/" +
                                      std::string(to_label(s)));
                    continue;
                }
                const SeasonSelection sel = select_season(cell_it->second, profile);
                if (!sel.index) {
                    const SeasonCandidate& first = cell_it->second.front();
                    diags.add(first.file, first.row, DiagnosticSeverity::Fatal,
                              "substation '" + id + "' " + std::to_string(year_value(y)) + "/" +
                                  std::string(to_label(s)) + ": " + sel.error);
                    usable = false;
                    continue;
                }
                table.set(y, s, cell_it->second[*sel.index].value_mw);
            }
        }
        if (!usable) continue;
        if (!missing.empty()) {
            std::string joined;
            for (std::size_t i = 0; i < missing.size(); ++i) {
                if (i != 0) joined += ", ";
                joined += missing[i];
            }
            diags.add(acc.first_file, acc.first_row, DiagnosticSeverity::Reject,
                      "substation '" + id + "' rejected: no headroom for " + joined);
            continue;
        }

        Substation sub;
        sub.id = id;
        sub.dno = to_label(acc.dno);
        sub.region = acc.region;
        sub.location = GeoPoint(acc.lat, acc.lon);
        sub.voltage_kv = acc.voltage_kv;
        sub.headroom = table;
        result.substations.push_back(std::move(sub));
    }
    // std::map iteration already gave us id order.
    if (result.substations.empty()) {
        diags.add("", 0, DiagnosticSeverity::Fatal, "no substations survived ingest");
    }
    return result;
}

// ---------------------------------------------------------------------------
// Site ingest
// ---------------------------------------------------------------------------

namespace {

std::string energy_column(HorizonYear y, std::optional<Pathway> p) {
    std::string name = "energy_" + std::to_string(year_value(y));
    if (p) {
        std::string label(to_label(*p));
        for (char& c : label) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        name += "_" + label;
    }
    return name + "_mwh";
}

std::string emissions_column(Pathway p) {
    std::string label(to_label(p));
    for (char& c : label) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return "emissions_2030_" + label + "_mt";
}

// Reads a required non-negative energy field; throws invalid_argument with
// a reason suitable for a diagnostic.
double energy_field(const std::vector<std::string>& fields, int col, const std::string& name) {
    const std::string& text = fields[static_cast<std::size_t>(col)];
    if (text.empty()) throw std::invalid_argument("missing " + name);
    const double v = csv::parse_double(text);
    if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(name + " must be a non-negative energy, got '" + text + "'");
    }
    return v;
}

}  // namespace

SiteIngestResult ingest_sites(const std::filesystem::path& point_file,
                              const std::filesystem::path& nonpoint_file,
                              const IngestOptions& options) {
    SiteIngestResult result;
    Diagnostics& diags = result.diagnostics;

    // --- point sites ---
    const std::string pfile = point_file.string();
    csv::Table points;
    bool points_ok = true;
    try {
        points = csv::read_file(point_file);
    } catch (const Error& e) {
        diags.add(pfile, 0, DiagnosticSeverity::Fatal, e.what());
        points_ok = false;
    }

    if (points_ok) {
        std::vector<std::string> required = {"site_id", "sector", "region", "lat", "lon",
                                             "emissions_2024_mt"};
        for (Pathway p : all_pathways()) required.push_back(emissions_column(p));
        required.push_back(energy_column(kBaselineYear, std::nullopt));
        for (HorizonYear y : analysis_years()) {
            for (Pathway p : all_pathways()) required.push_back(energy_column(y, p));
        }
        bool schema_ok = true;
        for (const std::string& name : required) {
            if (points.column(name) < 0) {
                diags.add(pfile, 0, DiagnosticSeverity::Fatal,
                          "schema mismatch: missing column '" + name + "'");
                schema_ok = false;
            }
        }

        if (schema_ok) {
            std::set<std::string> ids;
            for (std::size_t i = 0; i < points.rows.size(); ++i) {
                const int line = csv::Table::line_of_row(i);
                const auto& fields = points.rows[i];
                if (fields.size() != points.header.size()) {
                    diags.add(pfile, line, DiagnosticSeverity::Fatal,
                              "row has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(points.header.size()));
                    continue;
                }
                const auto fatal = [&](const std::string& reason) {
                    diags.add(pfile, line, DiagnosticSeverity::Fatal, reason);
                };

                PointSite site;
                site.id = fields[static_cast<std::size_t>(points.column("site_id"))];
                if (site.id.empty()) {
                    fatal("empty site id");
                    continue;
                }
                if (!ids.insert(site.id).second) {
                    fatal("duplicate site id '" + site.id + "'");
                    continue;
                }
                const std::string& sector_text =
                    fields[static_cast<std::size_t>(points.column("sector"))];
                const auto sector = parse_sector(sector_text);
                if (!sector) {
                    fatal("unknown sector '" + sector_text + "'");
                    continue;
                }
                site.sector = *sector;
                const std::string& region_text =
                    fields[static_cast<std::size_t>(points.column("region"))];
                const auto region = parse_region(region_text);
                if (!region) {
                    fatal("unknown region '" + region_text + "'");
                    continue;
                }
                site.region = *region;

                try {
                    const double lat =
                        csv::parse_double(fields[static_cast<std::size_t>(points.column("lat"))]);
                    const double lon =
                        csv::parse_double(fields[static_cast<std::size_t>(points.column("lon"))]);
                    site.location = GeoPoint(lat, lon);

                    site.emissions_2024_mt = csv::parse_double(
                        fields[static_cast<std::size_t>(points.column("emissions_2024_mt"))]);
                    if (site.emissions_2024_mt < 0.0 || !std::isfinite(site.emissions_2024_mt)) {
                        throw std::invalid_argument("emissions_2024_mt must be non-negative");
                    }
                    for (Pathway p : all_pathways()) {
                        const double mt = csv::parse_double(fields[static_cast<std::size_t>(
                            points.column(emissions_column(p)))]);
                        if (mt < 0.0 || !std::isfinite(mt)) {
                            throw std::invalid_argument(emissions_column(p) +
                                                        " must be non-negative");
                        }
                        site.emissions_2030_mt[static_cast<std::size_t>(pathway_index(p))] = mt;
                    }

                    const std::string baseline_col = energy_column(kBaselineYear, std::nullopt);
                    const double baseline_mw = annual_energy_to_capacity_mw(
                        energy_field(fields, points.column(baseline_col), baseline_col),
                        options.load_factor);
                    for (HorizonYear y : analysis_years()) {
                        for (Pathway p : all_pathways()) {
                            const std::string col = energy_column(y, p);
                            const double mw = annual_energy_to_capacity_mw(
                                energy_field(fields, points.column(col), col),
                                options.load_factor);
                            site.need.set(y, p, mw - baseline_mw);
                        }
                    }
                } catch (const std::invalid_argument& e) {
                    fatal(e.what());
                    continue;
                }
                result.sites.push_back(std::move(site));
            }
        }
    }

    // --- regional non-point demand ---
    const std::string nfile = nonpoint_file.string();
    csv::Table nonpoint;
    bool nonpoint_ok = true;
    try {
        nonpoint = csv::read_file(nonpoint_file);
    } catch (const Error& e) {
        diags.add(nfile, 0, DiagnosticSeverity::Fatal, e.what());
        nonpoint_ok = false;
    }

    if (nonpoint_ok) {
        std::vector<std::string> required = {"region", "sector",
                                             energy_column(kBaselineYear, std::nullopt)};
        for (HorizonYear y : analysis_years()) {
            for (Pathway p : all_pathways()) required.push_back(energy_column(y, p));
        }
        bool schema_ok = true;
        for (const std::string& name : required) {
            if (nonpoint.column(name) < 0) {
                diags.add(nfile, 0, DiagnosticSeverity::Fatal,
                          "schema mismatch: missing column '" + name + "'");
                schema_ok = false;
            }
        }

        if (schema_ok) {
            std::set<std::pair<Region, Sector>> seen;
            for (std::size_t i = 0; i < nonpoint.rows.size(); ++i) {
                const int line = csv::Table::line_of_row(i);
                const auto& fields = nonpoint.rows[i];
                if (fields.size() != nonpoint.header.size()) {
                    diags.add(nfile, line, DiagnosticSeverity::Fatal,
                              "row has " + std::to_string(fields.size()) +
                                  " fields, header has " +
                                  std::to_string(nonpoint.header.size()));
                    continue;
                }
                const auto fatal = [&](const std::string& reason) {
                    diags.add(nfile, line, DiagnosticSeverity::Fatal, reason);
                };

                RegionalNonPointDemand rec;
                const std::string& region_text =
                    fields[static_cast<std::size_t>(nonpoint.column("region"))];
                const auto region = parse_region(region_text);
                if (!region) {
                    fatal("unknown region '" + region_text + "'");
                    continue;
                }
                rec.region = *region;
                const std::string& sector_text =
                    fields[static_cast<std::size_t>(nonpoint.column("sector"))];
                const auto sector = parse_sector(sector_text);
                if (!sector) {
                    fatal("unknown sector '" + sector_text + "'");
                    continue;
                }
                rec.sector = *sector;
                if (!seen.insert({rec.region, rec.sector}).second) {
                    fatal("duplicate non-point record for " + std::string(to_label(rec.region)) +
                          "/" + std::string(to_label(rec.sector)));
                    continue;
                }

                try {
                    const std::string baseline_col = energy_column(kBaselineYear, std::nullopt);
                    const double baseline_mw = annual_energy_to_capacity_mw(
                        energy_field(fields, nonpoint.column(baseline_col), baseline_col),
                        options.load_factor);
                    for (HorizonYear y : analysis_years()) {
                        for (Pathway p : all_pathways()) {
                            const std::string col = energy_column(y, p);
                            const double mw = annual_energy_to_capacity_mw(
                                energy_field(fields, nonpoint.column(col), col),
                                options.load_factor);
                            rec.need.set(y, p, mw - baseline_mw);
                        }
                    }
                } catch (const std::invalid_argument& e) {
                    fatal(e.what());
                    continue;
                }
                result.nonpoint.push_back(std::move(rec));
            }
        }
    }

    std::sort(result.sites.begin(), result.sites.end(),
              [](const PointSite& a, const PointSite& b) { return a.id < b.id; });
    std::sort(result.nonpoint.begin(), result.nonpoint.end(),
              [](const RegionalNonPointDemand& a, const RegionalNonPointDemand& b) {
                  if (a.region != b.region) return region_index(a.region) < region_index(b.region);
                  return sector_index(a.sector) < sector_index(b.sector);
              });
    return result;
}

// ---------------------------------------------------------------------------
// Canonical dataset files
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> canonical_substation_header() {
    std::vector<std::string> h = {"substation_id", "dno", "region", "lat", "lon", "voltage_kv"};
    for (HorizonYear y : all_years()) {
        for (NetworkScenario s : all_scenarios()) {
            h.push_back("hr_" + std::to_string(year_value(y)) + "_" + std::string(to_label(s)));
        }
    }
    return h;
}

std::vector<std::string> canonical_site_header() {
    std::vector<std::string> h = {"site_type", "site_id", "sector", "region",
                                  "lat",       "lon",     "emissions_2024_mt"};
    for (Pathway p : all_pathways()) {
        h.push_back("emissions_2030_" + std::string(to_label(p)) + "_mt");
    }
    for (HorizonYear y : analysis_years()) {
        for (Pathway p : all_pathways()) {
            h.push_back("need_" + std::to_string(year_value(y)) + "_" +
                        std::string(to_label(p)) + "_mw");
        }
    }
    return h;
}

void check_header(const csv::Table& table, const std::vector<std::string>& expected,
                  const std::filesystem::path& path) {
    if (table.header != expected) {
        throw RunError("canonical file " + path.string() +
                       " does not match the current schema; re-run ingest");
    }
}

}  // namespace

void write_canonical_substations(const std::filesystem::path& path,
                                 const std::vector<Substation>& substations) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(substations.size());
    for (const Substation& sub : substations) {
        std::vector<std::string> row = {sub.id,
                                        sub.dno,
                                        std::string(to_label(sub.region)),
                                        csv::format_exact(sub.location.lat()),
                                        csv::format_exact(sub.location.lon()),
                                        csv::format_exact(sub.voltage_kv)};
        for (HorizonYear y : all_years()) {
            for (NetworkScenario s : all_scenarios()) {
                row.push_back(csv::format_exact(sub.headroom.at(y, s)));
            }
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, canonical_substation_header(), rows);
}

void write_canonical_sites(const std::filesystem::path& path,
                           const std::vector<PointSite>& sites,
                           const std::vector<RegionalNonPointDemand>& nonpoint) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(sites.size() + nonpoint.size());
    for (const PointSite& site : sites) {
        std::vector<std::string> row = {"point",
                                        site.id,
                                        std::string(to_label(site.sector)),
                                        std::string(to_label(site.region)),
                                        csv::format_exact(site.location.lat()),
                                        csv::format_exact(site.location.lon()),
                                        csv::format_exact(site.emissions_2024_mt)};
        for (Pathway p : all_pathways()) {
            row.push_back(csv::format_exact(
                site.emissions_2030_mt[static_cast<std::size_t>(pathway_index(p))]));
        }
        for (HorizonYear y : analysis_years()) {
            for (Pathway p : all_pathways()) {
                row.push_back(csv::format_exact(site.need.at(y, p)));
            }
        }
        rows.push_back(std::move(row));
    }
    for (const RegionalNonPointDemand& rec : nonpoint) {
        std::vector<std::string> row = {"nonpoint",
                                        "",
                                        std::string(to_label(rec.sector)),
                                        std::string(to_label(rec.region)),
                                        "",
                                        "",
                                        ""};
        for (std::size_t i = 0; i < static_cast<std::size_t>(kPathwayCount); ++i) {
            row.push_back("");
        }
        for (HorizonYear y : analysis_years()) {
            for (Pathway p : all_pathways()) {
                row.push_back(csv::format_exact(rec.need.at(y, p)));
            }
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, canonical_site_header(), rows);
}

std::vector<Substation> read_canonical_substations(const std::filesystem::path& path) {
    csv::Table table;
    try {
        table = csv::read_file(path);
    } catch (const Error& e) {
        throw RunError(e.what());
    }
    check_header(table, canonical_substation_header(), path);

    std::vector<Substation> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        if (f.size() != table.header.size()) {
            throw RunError("canonical substations row " +
                           std::to_string(csv::Table::line_of_row(i)) + ": field count mismatch");
        }
        try {
            Substation sub;
            sub.id = f[0];
            sub.dno = f[1];
            const auto region = parse_region(f[2]);
            if (!region) throw std::invalid_argument("unknown region '" + f[2] + "'");
            sub.region = *region;
            sub.location = GeoPoint(csv::parse_double(f[3]), csv::parse_double(f[4]));
            sub.voltage_kv = csv::parse_double(f[5]);
            std::size_t col = 6;
            for (HorizonYear y : all_years()) {
                for (NetworkScenario s : all_scenarios()) {
                    sub.headroom.set(y, s, csv::parse_double(f[col++]));
                }
            }
            out.push_back(std::move(sub));
        } catch (const std::invalid_argument& e) {
            throw RunError("canonical substations row " +
                           std::to_string(csv::Table::line_of_row(i)) + ": " + e.what());
        }
    }
    return out;
}

void read_canonical_sites(const std::filesystem::path& path, std::vector<PointSite>& sites,
                          std::vector<RegionalNonPointDemand>& nonpoint) {
    csv::Table table;
    try {
        table = csv::read_file(path);
    } catch (const Error& e) {
        throw RunError(e.what());
    }
    check_header(table, canonical_site_header(), path);

    sites.clear();
    nonpoint.clear();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::string where =
            "canonical sites row " + std::to_string(csv::Table::line_of_row(i));
        if (f.size() != table.header.size()) throw RunError(where + ": field count mismatch");
        try {
            const auto sector = parse_sector(f[2]);
            if (!sector) throw std::invalid_argument("unknown sector '" + f[2] + "'");
            const auto region = parse_region(f[3]);
            if (!region) throw std::invalid_argument("unknown region '" + f[3] + "'");

            if (f[0] == "point") {
                PointSite site;
                site.id = f[1];
                site.sector = *sector;
                site.region = *region;
                site.location = GeoPoint(csv::parse_double(f[4]), csv::parse_double(f[5]));
                site.emissions_2024_mt = csv::parse_double(f[6]);
                std::size_t col = 7;
                for (Pathway p : all_pathways()) {
                    site.emissions_2030_mt[static_cast<std::size_t>(pathway_index(p))] =
                        csv::parse_double(f[col++]);
                }
                for (HorizonYear y : analysis_years()) {
                    for (Pathway p : all_pathways()) {
                        site.need.set(y, p, csv::parse_double(f[col++]));
                    }
                }
                sites.push_back(std::move(site));
            } else if (f[0] == "nonpoint") {
                RegionalNonPointDemand rec;
                rec.sector = *sector;
                rec.region = *region;
                std::size_t col = 7 + static_cast<std::size_t>(kPathwayCount);
                for (HorizonYear y : analysis_years()) {
                    for (Pathway p : all_pathways()) {
                        rec.need.set(y, p, csv::parse_double(f[col++]));
                    }
                }
                nonpoint.push_back(std::move(rec));
            } else {
                throw std::invalid_argument("unknown site_type '" + f[0] + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw RunError(where + ": " + e.what());
        }
    }
}

}  // namespace gridcap
