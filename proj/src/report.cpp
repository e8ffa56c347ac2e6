#include "gridcap/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gridcap/csv.hpp"

namespace gridcap {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string checksum_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    const std::uint64_t hash = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) {
        out[static_cast<std::size_t>(15 - i)] = digits[(hash >> (4 * i)) & 0xF];
    }
    return out;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return checksum_hex(buffer.str());
}

namespace {

std::string mw(double v) { return csv::format_fixed(v, 3); }
std::string mt(double v) { return csv::format_fixed(v, 2); }
std::string share4(double v) { return csv::format_fixed(v, 4); }

std::vector<std::string> cell_columns(const Cell& cell) {
    return {cell_tag(cell), std::to_string(year_value(cell.year)),
            std::string(to_label(cell.scenario)), std::string(to_label(cell.pathway))};
}

// Accumulates written files so the manifest can list them all.
class ResultWriter {
  public:
    explicit ResultWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write_csv(const std::filesystem::path& rel, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
        const std::filesystem::path full = root_ / rel;
        std::filesystem::create_directories(full.parent_path());
        csv::write_file(full, header, rows);
        files_.push_back(rel.generic_string());
    }

    void write_text(const std::filesystem::path& rel, const std::string& text) {
        const std::filesystem::path full = root_ / rel;
        std::filesystem::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw Error("cannot write file: " + full.string());
        out << text;
        if (!out) throw Error("write failed: " + full.string());
        files_.push_back(rel.generic_string());
    }

    // key=value lines, sorted, with one file.<path>=<checksum> entry per
    // written file. The manifest itself is excluded.
    void write_manifest(const std::map<std::string, std::string>& extra) {
        std::map<std::string, std::string> lines = extra;
        for (const std::string& rel : files_) {
            lines["file." + rel] = file_checksum(root_ / rel);
        }
        std::string text;
        for (const auto& [key, value] : lines) {
            text += key + "=" + value + "\n";
        }
        std::ofstream out(root_ / "manifest.txt", std::ios::binary);
        if (!out) throw Error("cannot write manifest: " + (root_ / "manifest.txt").string());
        out << text;
    }

  private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
};

}  // namespace

void write_results(const std::filesystem::path& dir, const MatrixResult& matrix,
                   const Dataset& data, const RunConfig& config) {
    ResultWriter writer(dir);

    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(data.substations.size());
        for (const Substation& sub : data.substations) {
            rows.push_back({sub.id, sub.dno, std::string(to_label(sub.region)),
                            csv::format_exact(sub.location.lat()),
                            csv::format_exact(sub.location.lon()),
                            csv::format_exact(sub.voltage_kv)});
        }
        writer.write_csv("static/substations.csv",
                         {"substation_id", "dno", "region", "lat", "lon", "voltage_kv"}, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(data.sites.size());
        for (const PointSite& site : data.sites) {
            const SiteAssignment& hit = matrix.assignment.at(site.id);
            rows.push_back({site.id, std::string(to_label(site.sector)),
                            std::string(to_label(site.region)),
                            csv::format_exact(site.location.lat()),
                            csv::format_exact(site.location.lon()), hit.substation_id,
                            csv::format_fixed(hit.distance_km, 3),
                            std::string(to_label(matrix.site_class.at(site.id)))});
        }
        writer.write_csv("static/sites.csv",
                         {"site_id", "sector", "region", "lat", "lon", "nearest_substation_id",
                          "distance_km", "location_class"},
                         rows);
    }

    std::vector<std::vector<std::string>> summary_rows;
    std::vector<std::vector<std::string>> balance_rows;
    std::vector<std::vector<std::string>> emissions_rows;
    std::vector<std::vector<std::string>> sector_rows;
    std::vector<std::vector<std::string>> split_rows;
    std::vector<std::string> cell_tags;

    for (const CellResult& cr : matrix.cells) {
        cell_tags.push_back(cell_tag(cr.cell));

        const GBSummary& s = cr.summary;
        std::vector<std::string> row = cell_columns(cr.cell);
        row.insert(row.end(),
                   {mw(s.total_headroom_mw), mw(s.network_shortfall_mw),
                    mw(s.regional_shortfall_mw), mw(s.industrial_need_total_mw),
                    mw(s.industrial_need_net_mw), mw(s.unmet_industrial_need_mw),
                    mw(s.total_capacity_need_mw), mw(s.point_need_total_mw),
                    mw(s.point_constrained_capacity_mw), mw(s.nearest_substation_shortfall_mw),
                    mw(s.point_total_need_mw), std::to_string(s.reasons.total()),
                    std::to_string(s.reasons.unconstrained),
                    std::to_string(s.reasons.already_constrained),
                    std::to_string(s.reasons.insufficient_headroom),
                    s.constrained_share() ? share4(*s.constrained_share()) : std::string()});
        summary_rows.push_back(std::move(row));

        for (const RegionalBalance& rb : cr.balances) {
            balance_rows.push_back({cell_tag(cr.cell), std::string(to_label(rb.region)),
                                    mw(rb.regional_headroom_mw), mw(rb.industrial_need_mw),
                                    mw(rb.balance_mw), mw(rb.unmet_industrial_need_mw)});
        }

        emissions_rows.push_back(
            {cell_tag(cr.cell), std::to_string(year_value(cr.cell.year)),
             std::string(to_label(cr.cell.scenario)), std::string(to_label(cr.cell.pathway)),
             cr.emissions.basis == EmissionsBasis::Year2030 ? "2030" : "2024",
             mt(cr.emissions.at_risk_mt), mt(cr.emissions.total_mt),
             cr.emissions.share ? share4(*cr.emissions.share) : std::string()});

        for (Sector sector : all_sectors()) {
            const auto& share = cr.sector_shares[static_cast<std::size_t>(sector_index(sector))];
            sector_rows.push_back({cell_tag(cr.cell), std::string(to_label(sector)),
                                   share ? share4(*share) : std::string()});
        }

        split_rows.push_back({cell_tag(cr.cell), std::to_string(cr.split.cluster_total),
                              std::to_string(cr.split.cluster_constrained),
                              std::to_string(cr.split.dispersed_total),
                              std::to_string(cr.split.dispersed_constrained)});

        // Per-cell detail files.
        std::vector<AllocationOutcome> outcomes = cr.outcomes;
        std::sort(outcomes.begin(), outcomes.end(),
                  [](const AllocationOutcome& a, const AllocationOutcome& b) {
                      return a.site_id < b.site_id;
                  });
        std::vector<std::vector<std::string>> outcome_rows;
        outcome_rows.reserve(outcomes.size());
        for (const AllocationOutcome& out : outcomes) {
            outcome_rows.push_back({out.site_id, out.substation_id, mw(out.demand_mw),
                                    mw(out.headroom_before_mw), mw(out.constrained_mw),
                                    std::string(to_label(out.reason))});
        }
        const std::filesystem::path cell_dir = std::filesystem::path("cells") / cell_tag(cr.cell);
        writer.write_csv(cell_dir / "outcomes.csv",
                         {"site_id", "substation_id", "demand_mw", "headroom_before_mw",
                          "constrained_mw", "reason"},
                         outcome_rows);

        std::vector<std::vector<std::string>> ledger_rows;
        for (const auto& [id, ledger] : cr.ledgers) {
            std::string processed;
            for (std::size_t i = 0; i < ledger.processed_site_ids.size(); ++i) {
                if (i != 0) processed += ";";
                processed += ledger.processed_site_ids[i];
            }
            ledger_rows.push_back({id, mw(ledger.initial_headroom_mw),
                                   mw(ledger.remaining_headroom_mw), processed});
        }
        writer.write_csv(cell_dir / "ledgers.csv",
                         {"substation_id", "initial_headroom_mw", "remaining_headroom_mw",
                          "processed_site_ids"},
                         ledger_rows);
    }

    writer.write_csv("gb_summaries.csv",
                     {"cell", "year", "scenario", "pathway", "total_headroom_mw",
                      "network_shortfall_mw", "regional_shortfall_mw",
                      "industrial_need_total_mw", "industrial_need_net_mw",
                      "unmet_industrial_need_mw", "total_capacity_need_mw",
                      "point_need_total_mw", "point_constrained_capacity_mw",
                      "nearest_substation_shortfall_mw", "point_total_need_mw", "sites_total",
                      "sites_unconstrained", "sites_already_constrained",
                      "sites_insufficient_headroom", "constrained_share"},
                     summary_rows);
    writer.write_csv("regional_balances.csv",
                     {"cell", "region", "regional_headroom_mw", "industrial_need_mw",
                      "balance_mw", "unmet_industrial_need_mw"},
                     balance_rows);
    writer.write_csv("emissions_at_risk.csv",
                     {"cell", "year", "scenario", "pathway", "basis", "emissions_at_risk_mt",
                      "emissions_total_mt", "share"},
                     emissions_rows);
    writer.write_csv("sector_shares.csv", {"cell", "sector", "share"}, sector_rows);
    writer.write_csv("location_split.csv",
                     {"cell", "cluster_total", "cluster_constrained", "dispersed_total",
                      "dispersed_constrained"},
                     split_rows);

    std::map<std::string, std::string> extra;
    extra["config.power_factor"] = csv::format_exact(config.power_factor);
    extra["config.load_factor"] = csv::format_exact(config.load_factor);
    extra["config.cluster_threshold_km"] = csv::format_exact(config.cluster_threshold_km);
    extra["config.emissions_basis"] =
        config.emissions_basis == EmissionsBasis::Year2030 ? "2030" : "2024";
    {
        std::string filters;
        for (std::size_t i = 0; i < config.cells.size(); ++i) {
            if (i != 0) filters += ";";
            filters += config.cells[i];
        }
        extra["config.cells"] = filters.empty() ? "all" : filters;
    }
    extra["dataset.substation_count"] = std::to_string(data.substations.size());
    extra["dataset.site_count"] = std::to_string(data.sites.size());
    extra["dataset.nonpoint_count"] = std::to_string(data.nonpoint.size());
    extra["dataset.substations_file.fnv1a64"] =
        file_checksum(config.dataset_dir / "substations.csv");
    extra["dataset.sites_file.fnv1a64"] = file_checksum(config.dataset_dir / "sites.csv");
    {
        std::string joined;
        for (std::size_t i = 0; i < cell_tags.size(); ++i) {
            if (i != 0) joined += ";";
            joined += cell_tags[i];
        }
        extra["cells.count"] = std::to_string(cell_tags.size());
        extra["cells.list"] = joined;
    }
    writer.write_manifest(extra);
}

std::optional<ReportFormat> parse_format(std::string_view text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Report stage
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ReportError("cannot open manifest: " + path.string());
    std::map<std::string, std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ReportError("malformed manifest line: " + line);
        }
        lines[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return lines;
}

csv::Table load_table(const std::filesystem::path& path,
                      const std::vector<std::string>& required) {
    csv::Table table;
    try {
        table = csv::read_file(path);
    } catch (const Error& e) {
        throw ReportError(e.what());
    }
    for (const std::string& name : required) {
        if (table.column(name) < 0) {
            throw ReportError(path.string() + ": missing column '" + name + "'");
        }
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != table.header.size()) {
            throw ReportError(path.string() + " row " +
                              std::to_string(csv::Table::line_of_row(i)) +
                              ": field count mismatch");
        }
    }
    return table;
}

double parse_report_double(const std::string& field, const std::string& context) {
    try {
        return csv::parse_double(field);
    } catch (const std::invalid_argument&) {
        throw ReportError(context + ": not a number: '" + field + "'");
    }
}

struct TableWriter {
    std::filesystem::path root;
    ReportFormat format;
    std::vector<std::string> files;

    void write(const std::string& stem, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
        if (format == ReportFormat::Csv) {
            const std::string rel = stem + ".csv";
            csv::write_file(root / rel, header, rows);
            files.push_back(rel);
            return;
        }
        std::string text = "| " ;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i != 0) text += " | ";
            text += header[i];
        }
        text += " |\n|";
        for (std::size_t i = 0; i < header.size(); ++i) text += " --- |";
        text += "\n";
        for (const auto& row : rows) {
            text += "| ";
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i != 0) text += " | ";
                text += row[i];
            }
            text += " |\n";
        }
        const std::string rel = stem + ".md";
        std::ofstream out(root / rel, std::ios::binary);
        if (!out) throw ReportError("cannot write file: " + (root / rel).string());
        out << text;
        files.push_back(rel);
    }
};

// Indexed row access by cell tag for the one-row-per-cell result families.
class CellRows {
  public:
    CellRows(csv::Table table, const std::string& name) : table_(std::move(table)) {
        const int cell_col = table_.column("cell");
        for (std::size_t i = 0; i < table_.rows.size(); ++i) {
            by_tag_[table_.rows[i][static_cast<std::size_t>(cell_col)]] = i;
        }
        name_ = name;
    }

    const std::string& field(const std::string& tag, const std::string& column) const {
        const auto row = by_tag_.find(tag);
        if (row == by_tag_.end()) {
            throw ReportError(name_ + ": no row for cell " + tag);
        }
        const int col = table_.column(column);
        if (col < 0) throw ReportError(name_ + ": missing column '" + column + "'");
        return table_.rows[row->second][static_cast<std::size_t>(col)];
    }

  private:
    csv::Table table_;
    std::map<std::string, std::size_t> by_tag_;
    std::string name_;
};

}  // namespace

void write_report(const std::filesystem::path& results_dir, ReportFormat format) {
    const auto manifest = read_manifest(results_dir / "manifest.txt");

    // The manifest is the authority on what belongs to this result set;
    // verify it before trusting any file.
    for (const auto& [key, value] : manifest) {
        if (key.rfind("file.", 0) != 0) continue;
        const std::filesystem::path path = results_dir / key.substr(5);
        std::string checksum;
        try {
            checksum = file_checksum(path);
        } catch (const Error& e) {
            throw ReportError(std::string("manifest names a missing file: ") + e.what());
        }
        if (checksum != value) {
            throw ReportError("checksum mismatch for " + path.string() +
                              "; result set is corrupt or was edited");
        }
    }

    const auto cells_it = manifest.find("cells.list");
    if (cells_it == manifest.end()) throw ReportError("manifest has no cells.list");
    std::vector<Cell> cells;
    {
        std::stringstream stream(cells_it->second);
        std::string tag;
        while (std::getline(stream, tag, ';')) {
            const auto cell = cell_from_tag(tag);
            if (!cell) throw ReportError("manifest lists unknown cell tag '" + tag + "'");
            cells.push_back(*cell);
        }
    }
    if (cells.empty()) throw ReportError("manifest lists no cells");

    const CellRows summaries(
        load_table(results_dir / "gb_summaries.csv",
                   {"cell", "year", "scenario", "pathway", "total_headroom_mw",
                    "network_shortfall_mw", "regional_shortfall_mw", "industrial_need_total_mw",
                    "unmet_industrial_need_mw", "total_capacity_need_mw",
                    "point_constrained_capacity_mw", "nearest_substation_shortfall_mw",
                    "point_total_need_mw", "sites_total", "sites_unconstrained",
                    "sites_already_constrained", "sites_insufficient_headroom",
                    "constrained_share"}),
        "gb_summaries.csv");
    const CellRows emissions(load_table(results_dir / "emissions_at_risk.csv",
                                        {"cell", "basis", "emissions_at_risk_mt",
                                         "emissions_total_mt", "share"}),
                             "emissions_at_risk.csv");
    const CellRows splits(load_table(results_dir / "location_split.csv",
                                     {"cell", "cluster_total", "cluster_constrained",
                                      "dispersed_total", "dispersed_constrained"}),
                          "location_split.csv");
    const csv::Table sector_shares =
        load_table(results_dir / "sector_shares.csv", {"cell", "sector", "share"});
    const csv::Table static_sites =
        load_table(results_dir / "static/sites.csv",
                   {"site_id", "sector", "lat", "lon", "nearest_substation_id"});
    const csv::Table static_subs =
        load_table(results_dir / "static/substations.csv", {"substation_id", "lat", "lon"});

    // Per-cell outcomes: reconcile against the summary rows, and collect
    // the constrained sites for the geographic output.
    struct ConstrainedSite {
        std::string site_id;
        std::string substation_id;
        std::string reason;
        double constrained_mw = 0.0;
    };
    std::map<std::string, std::vector<ConstrainedSite>> constrained_by_cell;

    for (const Cell& cell : cells) {
        const std::string tag = cell_tag(cell);
        const csv::Table outcomes = load_table(
            results_dir / "cells" / tag / "outcomes.csv",
            {"site_id", "substation_id", "demand_mw", "constrained_mw", "reason"});

        int unconstrained = 0;
        int already = 0;
        int insufficient = 0;
        double constrained_sum = 0.0;
        std::vector<ConstrainedSite>& constrained = constrained_by_cell[tag];

        const int id_col = outcomes.column("site_id");
        const int sub_col = outcomes.column("substation_id");
        const int cmw_col = outcomes.column("constrained_mw");
        const int reason_col = outcomes.column("reason");
        for (std::size_t i = 0; i < outcomes.rows.size(); ++i) {
            const auto& row = outcomes.rows[i];
            const std::string& reason_text = row[static_cast<std::size_t>(reason_col)];
            const auto reason = parse_reason(reason_text);
            if (!reason) {
                throw ReportError(tag + "/outcomes.csv: unknown reason '" + reason_text + "'");
            }
            const double constrained_mw = parse_report_double(
                row[static_cast<std::size_t>(cmw_col)], tag + "/outcomes.csv constrained_mw");
            constrained_sum += constrained_mw;
            switch (*reason) {
                case ConstraintReason::Unconstrained: ++unconstrained; break;
                case ConstraintReason::SubstationAlreadyConstrained: ++already; break;
                case ConstraintReason::InsufficientHeadroom: ++insufficient; break;
            }
            if (*reason != ConstraintReason::Unconstrained) {
                constrained.push_back({row[static_cast<std::size_t>(id_col)],
                                       row[static_cast<std::size_t>(sub_col)], reason_text,
                                       constrained_mw});
            }
        }

        const auto summary_int = [&](const std::string& column) {
            return static_cast<int>(
                parse_report_double(summaries.field(tag, column), "gb_summaries " + column));
        };
        if (summary_int("sites_total") != unconstrained + already + insufficient ||
            summary_int("sites_unconstrained") != unconstrained ||
            summary_int("sites_already_constrained") != already ||
            summary_int("sites_insufficient_headroom") != insufficient) {
            throw ReportError("cell " + tag +
                              ": reason counts in gb_summaries.csv do not match outcomes.csv");
        }
        const double summary_capacity =
            parse_report_double(summaries.field(tag, "point_constrained_capacity_mw"),
                                "gb_summaries point_constrained_capacity_mw");
        // Both sides carry 3-decimal rounding; allow half an ulp of the
        // last written digit per row plus one for the total.
        const double tolerance =
            0.0005 * static_cast<double>(outcomes.rows.size() + 1) + 1e-9;
        if (std::fabs(summary_capacity - constrained_sum) > tolerance) {
            throw ReportError("cell " + tag +
                              ": constrained capacity in gb_summaries.csv does not match "
                              "outcomes.csv");
        }
    }

    const std::filesystem::path report_dir = results_dir / "report";
    std::filesystem::create_directories(report_dir / "geo");

    TableWriter tables{report_dir, format, {}};

    {
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            const std::string tag = cell_tag(cell);
            const int total = static_cast<int>(parse_report_double(
                summaries.field(tag, "sites_total"), "sites_total"));
            const int constrained =
                static_cast<int>(
                    parse_report_double(summaries.field(tag, "sites_already_constrained"),
                                        "sites_already_constrained")) +
                static_cast<int>(
                    parse_report_double(summaries.field(tag, "sites_insufficient_headroom"),
                                        "sites_insufficient_headroom"));
            rows.push_back({tag, std::to_string(year_value(cell.year)),
                            std::string(to_label(cell.scenario)),
                            std::string(to_label(cell.pathway)), std::to_string(total),
                            std::to_string(constrained),
                            summaries.field(tag, "constrained_share")});
        }
        tables.write("summary_constrained",
                     {"cell", "year", "scenario", "pathway", "sites_total", "sites_constrained",
                      "constrained_share"},
                     rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            const std::string tag = cell_tag(cell);
            rows.push_back({tag, std::to_string(year_value(cell.year)),
                            std::string(to_label(cell.scenario)),
                            std::string(to_label(cell.pathway)),
                            summaries.field(tag, "sites_unconstrained"),
                            summaries.field(tag, "sites_already_constrained"),
                            summaries.field(tag, "sites_insufficient_headroom")});
        }
        tables.write("summary_reasons",
                     {"cell", "year", "scenario", "pathway", "unconstrained",
                      "substation_already_constrained", "insufficient_headroom"},
                     rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            const std::string tag = cell_tag(cell);
            rows.push_back({tag, std::to_string(year_value(cell.year)),
                            std::string(to_label(cell.scenario)),
                            std::string(to_label(cell.pathway)),
                            summaries.field(tag, "total_headroom_mw"),
                            summaries.field(tag, "network_shortfall_mw"),
                            summaries.field(tag, "regional_shortfall_mw"),
                            summaries.field(tag, "industrial_need_total_mw"),
                            summaries.field(tag, "unmet_industrial_need_mw"),
                            summaries.field(tag, "total_capacity_need_mw"),
                            summaries.field(tag, "point_constrained_capacity_mw"),
                            summaries.field(tag, "nearest_substation_shortfall_mw"),
                            summaries.field(tag, "point_total_need_mw")});
        }
        tables.write("summary_shortfalls",
                     {"cell", "year", "scenario", "pathway", "total_headroom_mw",
                      "network_shortfall_mw", "regional_shortfall_mw",
                      "industrial_need_total_mw", "unmet_industrial_need_mw",
                      "total_capacity_need_mw", "point_constrained_capacity_mw",
                      "nearest_substation_shortfall_mw", "point_total_need_mw"},
                     rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            const std::string tag = cell_tag(cell);
            rows.push_back({tag, std::to_string(year_value(cell.year)),
                            std::string(to_label(cell.scenario)),
                            std::string(to_label(cell.pathway)), emissions.field(tag, "basis"),
                            emissions.field(tag, "emissions_at_risk_mt"),
                            emissions.field(tag, "emissions_total_mt"),
                            emissions.field(tag, "share")});
        }
        tables.write("summary_emissions",
                     {"cell", "year", "scenario", "pathway", "basis", "emissions_at_risk_mt",
                      "emissions_total_mt", "share"},
                     rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : sector_shares.rows) rows.push_back(row);
        tables.write("summary_sector_shares", sector_shares.header, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            const std::string tag = cell_tag(cell);
            const double cluster_constrained = parse_report_double(
                splits.field(tag, "cluster_constrained"), "cluster_constrained");
            const double dispersed_constrained = parse_report_double(
                splits.field(tag, "dispersed_constrained"), "dispersed_constrained");
            rows.push_back({tag, splits.field(tag, "cluster_total"),
                            splits.field(tag, "cluster_constrained"),
                            splits.field(tag, "dispersed_total"),
                            splits.field(tag, "dispersed_constrained"),
                            cluster_constrained > 0.0
                                ? share4(dispersed_constrained / cluster_constrained)
                                : std::string()});
        }
        tables.write("summary_location_split",
                     {"cell", "cluster_total", "cluster_constrained", "dispersed_total",
                      "dispersed_constrained", "dispersed_to_cluster_ratio"},
                     rows);
    }
    {
        // Pathway sensitivity against Balanced within each (year, scenario).
        std::set<std::string> present;
        for (const Cell& cell : cells) present.insert(cell_tag(cell));
        std::vector<std::vector<std::string>> rows;
        for (const Cell& cell : cells) {
            if (cell.pathway == Pathway::Balanced) continue;
            Cell balanced = cell;
            balanced.pathway = Pathway::Balanced;
            if (!present.count(cell_tag(balanced))) continue;

            const std::string tag = cell_tag(cell);
            const std::string base_tag = cell_tag(balanced);
            const std::string& share_text = summaries.field(tag, "constrained_share");
            const std::string& base_share_text = summaries.field(base_tag, "constrained_share");
            std::string share_delta;
            if (!share_text.empty() && !base_share_text.empty()) {
                share_delta = csv::format_fixed(
                    (parse_report_double(share_text, "constrained_share") -
                     parse_report_double(base_share_text, "constrained_share")) *
                        100.0,
                    2);
            }
            const double capacity = parse_report_double(
                summaries.field(tag, "point_constrained_capacity_mw"), "capacity");
            const double base_capacity = parse_report_double(
                summaries.field(base_tag, "point_constrained_capacity_mw"), "capacity");
            rows.push_back({tag, std::to_string(year_value(cell.year)),
                            std::string(to_label(cell.scenario)),
                            std::string(to_label(cell.pathway)), share_text, share_delta,
                            mw(capacity), mw(capacity - base_capacity),
                            summaries.field(tag, "point_total_need_mw")});
        }
        tables.write("sensitivity",
                     {"cell", "year", "scenario", "pathway", "constrained_share",
                      "share_delta_pp_vs_balanced", "point_constrained_capacity_mw",
                      "capacity_delta_mw_vs_balanced", "point_total_need_mw"},
                     rows);
    }

    // Geographic feature files: constrained sites plus their nearest
    // substations, one file per cell, coordinates as [lon, lat].
    std::map<std::string, std::pair<double, double>> site_coords;
    std::map<std::string, std::string> site_sector;
    {
        const int id_col = static_sites.column("site_id");
        const int sector_col = static_sites.column("sector");
        const int lat_col = static_sites.column("lat");
        const int lon_col = static_sites.column("lon");
        for (const auto& row : static_sites.rows) {
            const std::string& id = row[static_cast<std::size_t>(id_col)];
            site_coords[id] = {
                parse_report_double(row[static_cast<std::size_t>(lat_col)], "site lat"),
                parse_report_double(row[static_cast<std::size_t>(lon_col)], "site lon")};
            site_sector[id] = row[static_cast<std::size_t>(sector_col)];
        }
    }
    std::map<std::string, std::pair<double, double>> sub_coords;
    {
        const int id_col = static_subs.column("substation_id");
        const int lat_col = static_subs.column("lat");
        const int lon_col = static_subs.column("lon");
        for (const auto& row : static_subs.rows) {
            sub_coords[row[static_cast<std::size_t>(id_col)]] = {
                parse_report_double(row[static_cast<std::size_t>(lat_col)], "substation lat"),
                parse_report_double(row[static_cast<std::size_t>(lon_col)], "substation lon")};
        }
    }

    for (const Cell& cell : cells) {
        const std::string tag = cell_tag(cell);
        auto& constrained = constrained_by_cell[tag];
        std::sort(constrained.begin(), constrained.end(),
                  [](const ConstrainedSite& a, const ConstrainedSite& b) {
                      return a.site_id < b.site_id;
                  });

        nlohmann::ordered_json features = nlohmann::ordered_json::array();
        std::set<std::string> substations;
        for (const ConstrainedSite& site : constrained) {
            const auto coords = site_coords.find(site.site_id);
            if (coords == site_coords.end()) {
                throw ReportError("constrained site " + site.site_id +
                                  " is missing from static/sites.csv");
            }
            nlohmann::ordered_json feature;
            feature["type"] = "Feature";
            feature["geometry"] = {{"type", "Point"},
                                   {"coordinates", {coords->second.second, coords->second.first}}};
            feature["properties"] = {{"id", site.site_id},
                                     {"kind", "site"},
                                     {"sector", site_sector.at(site.site_id)},
                                     {"reason", site.reason},
                                     {"constrained_mw", site.constrained_mw}};
            features.push_back(std::move(feature));
            substations.insert(site.substation_id);
        }
        for (const std::string& id : substations) {
            const auto coords = sub_coords.find(id);
            if (coords == sub_coords.end()) {
                throw ReportError("substation " + id + " is missing from static/substations.csv");
            }
            nlohmann::ordered_json feature;
            feature["type"] = "Feature";
            feature["geometry"] = {{"type", "Point"},
                                   {"coordinates", {coords->second.second, coords->second.first}}};
            feature["properties"] = {{"id", id}, {"kind", "substation"}};
            features.push_back(std::move(feature));
        }
        nlohmann::ordered_json collection;
        collection["type"] = "FeatureCollection";
        collection["features"] = std::move(features);

        const std::string rel = "geo/" + tag + ".geojson";
        std::ofstream out(report_dir / rel, std::ios::binary);
        if (!out) throw ReportError("cannot write file: " + (report_dir / rel).string());
        out << collection.dump(2) << "\n";
        tables.files.push_back(rel);
    }

    std::map<std::string, std::string> lines;
    lines["report.format"] = format == ReportFormat::Csv ? "csv" : "markdown";
    for (const std::string& rel : tables.files) {
        lines["file." + rel] = file_checksum(report_dir / rel);
    }
    std::string text;
    for (const auto& [key, value] : lines) text += key + "=" + value + "\n";
    std::ofstream out(report_dir / "manifest.txt", std::ios::binary);
    if (!out) throw ReportError("cannot write report manifest");
    out << text;
}

}  // namespace gridcap
