#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridcap/analysis.hpp"
#include "gridcap/config.hpp"
#include "gridcap/csv.hpp"
#include "gridcap/ingest.hpp"
#include "gridcap/report.hpp"

namespace {

using namespace gridcap;

// Exit codes: 0 success, 2 configuration, 3 ingest, 4 run, 5 report.
constexpr int kExitConfig = 2;
constexpr int kExitIngest = 3;
constexpr int kExitRun = 4;
constexpr int kExitReport = 5;

int cmd_ingest(const RunConfig& cfg) {
    const std::vector<DnoProfile> profiles = load_profiles(cfg.profiles);
    const IngestOptions options{cfg.power_factor, cfg.load_factor};

    HeadroomIngestResult headroom = ingest_headroom(profiles, options);
    SiteIngestResult sites = ingest_sites(cfg.point_sites, cfg.nonpoint_sites, options);

    Diagnostics diagnostics = std::move(headroom.diagnostics);
    diagnostics.merge(std::move(sites.diagnostics));

    std::filesystem::create_directories(cfg.dataset_dir);
    write_diagnostics(cfg.dataset_dir / "diagnostics.csv", diagnostics);

    std::cout << "ingest: " << headroom.substations.size() << " substations, "
              << sites.sites.size() << " point sites, " << sites.nonpoint.size()
              << " non-point records\n";
    std::cout << "ingest: " << diagnostics.count(DiagnosticSeverity::Reject) << " rejected, "
              << diagnostics.count(DiagnosticSeverity::Skip) << " skipped ("
              << headroom.skipped_year_rows << " out-of-horizon year rows)\n";

    if (diagnostics.has_fatal()) {
        int shown = 0;
        for (const Diagnostic& d : diagnostics.entries) {
            if (d.severity != DiagnosticSeverity::Fatal) continue;
            if (shown++ == 5) {
                std::cerr << "  ...\n";
                break;
            }
            std::cerr << "  " << (d.file.empty() ? "<dataset>" : d.file);
            if (d.row > 0) std::cerr << ":" << d.row;
            std::cerr << ": " << d.reason << "\n";
        }
        throw IngestError(std::to_string(diagnostics.count(DiagnosticSeverity::Fatal)) +
                          " fatal ingest errors; see " +
                          (cfg.dataset_dir / "diagnostics.csv").string());
    }

    write_canonical_substations(cfg.dataset_dir / "substations.csv", headroom.substations);
    write_canonical_sites(cfg.dataset_dir / "sites.csv", sites.sites, sites.nonpoint);
    std::cout << "ingest: wrote " << (cfg.dataset_dir / "substations.csv").string() << " and "
              << (cfg.dataset_dir / "sites.csv").string() << "\n";
    return 0;
}

int cmd_run(const RunConfig& cfg) {
    Dataset data;
    data.substations = read_canonical_substations(cfg.dataset_dir / "substations.csv");
    read_canonical_sites(cfg.dataset_dir / "sites.csv", data.sites, data.nonpoint);

    const ClusterCatalog catalog = load_clusters(cfg.clusters, cfg.cluster_threshold_km);

    RunOptions options;
    options.cells = filter_cells(cfg.cells);
    options.cluster_threshold_km = cfg.cluster_threshold_km;
    options.emissions_basis = cfg.emissions_basis;
    options.jobs = cfg.jobs;

    const MatrixResult matrix = run_matrix(data, catalog, options);
    write_results(cfg.out_dir, matrix, data, cfg);

    std::cout << "run: " << matrix.cells.size() << " cells over " << data.sites.size()
              << " sites and " << data.substations.size() << " substations -> "
              << cfg.out_dir.string() << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg, const std::string& format_text) {
    const auto format = parse_format(format_text);
    if (!format) throw ReportError("unknown report format '" + format_text + "'");
    write_report(cfg.out_dir, *format);
    std::cout << "report: wrote " << (cfg.out_dir / "report").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Electricity-network capacity constraints on industrial decarbonisation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::vector<std::string> cell_filters;
    double power_factor = -1.0;
    double load_factor = -1.0;
    double cluster_km = -1.0;
    int jobs = 0;
    std::string format_text = "csv";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run configuration document (JSON)")
            ->required();
        cmd->add_option("--out", out_override, "Output directory override");
    };

    CLI::App* ingest = app.add_subcommand(
        "ingest", "Harmonize operator headroom and industrial demand files");
    add_common(ingest);
    ingest->add_option("--power-factor", power_factor, "MVA to MW conversion factor");
    ingest->add_option("--load-factor", load_factor, "Annual energy to capacity load factor");

    CLI::App* run =
        app.add_subcommand("run", "Assign, allocate and aggregate the scenario matrix");
    add_common(run);
    run->add_option("--cells", cell_filters,
                    "Cell filters (year:scenario:pathway, * wildcards)");
    run->add_option("--cluster-km", cluster_km, "Cluster distance threshold in km");
    run->add_option("--jobs", jobs, "Concurrent cells");

    CLI::App* report = app.add_subcommand("report", "Render summary tables and map features");
    add_common(report);
    report->add_option("--format", format_text, "Table format: csv or markdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (ingest->parsed()) {
            if (!out_override.empty()) cfg.dataset_dir = out_override;
            if (power_factor > 0.0) cfg.power_factor = power_factor;
            if (load_factor > 0.0) cfg.load_factor = load_factor;
            return cmd_ingest(cfg);
        }
        if (run->parsed()) {
            if (!out_override.empty()) cfg.out_dir = out_override;
            if (!cell_filters.empty()) cfg.cells = cell_filters;
            if (cluster_km > 0.0) cfg.cluster_threshold_km = cluster_km;
            if (jobs > 0) cfg.jobs = jobs;
            return cmd_run(cfg);
        }
        if (!out_override.empty()) cfg.out_dir = out_override;
        return cmd_report(cfg, format_text);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IngestError& e) {
        std::cerr << "ingest error: " << e.what() << "\n";
        return kExitIngest;
    } catch (const ReportError& e) {
        std::cerr << "report error: " << e.what() << "\n";
        return kExitReport;
    } catch (const RunError& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return kExitRun;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
