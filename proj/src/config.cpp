#include "gridcap/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "gridcap/csv.hpp"

namespace gridcap {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, std::string value) {
    std::filesystem::path p = std::move(value);
    if (p.is_relative()) p = base / p;
    return p;
}

double positive_number(const json& doc, const std::string& key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    const double v = doc[key].get<double>();
    if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
    return v;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration: " + path.string());

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("configuration " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

    static const std::set<std::string> known = {
        "profiles",      "point_sites",        "nonpoint_sites", "clusters",
        "dataset_dir",   "out_dir",            "power_factor",   "load_factor",
        "cluster_threshold_km", "emissions_basis", "cells",      "jobs"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
    }

    const std::filesystem::path base = path.parent_path();
    RunConfig cfg;

    const auto path_field = [&](const std::string& key, std::filesystem::path& slot,
                                bool required) {
        if (!doc.contains(key)) {
            if (required) throw ConfigError("configuration is missing '" + key + "'");
            return;
        }
        if (!doc[key].is_string()) throw ConfigError("'" + key + "' must be a path string");
        slot = resolve(base, doc[key].get<std::string>());
    };
    path_field("profiles", cfg.profiles, true);
    path_field("point_sites", cfg.point_sites, true);
    path_field("nonpoint_sites", cfg.nonpoint_sites, true);
    path_field("clusters", cfg.clusters, true);
    cfg.dataset_dir = base / "dataset";
    cfg.out_dir = base / "results";
    path_field("dataset_dir", cfg.dataset_dir, false);
    path_field("out_dir", cfg.out_dir, false);

    cfg.power_factor = positive_number(doc, "power_factor", cfg.power_factor);
    cfg.load_factor = positive_number(doc, "load_factor", cfg.load_factor);
    if (cfg.power_factor > 1.0) throw ConfigError("'power_factor' must be in (0, 1]");
    if (cfg.load_factor > 1.0) throw ConfigError("'load_factor' must be in (0, 1]");
    cfg.cluster_threshold_km =
        positive_number(doc, "cluster_threshold_km", cfg.cluster_threshold_km);

    if (doc.contains("emissions_basis")) {
        const std::string basis = doc["emissions_basis"].is_string()
                                      ? doc["emissions_basis"].get<std::string>()
                                      : std::string();
        if (basis == "2030") cfg.emissions_basis = EmissionsBasis::Year2030;
        else if (basis == "2024") cfg.emissions_basis = EmissionsBasis::Year2024;
        else throw ConfigError("'emissions_basis' must be \"2030\" or \"2024\"");
    }

    if (doc.contains("cells")) {
        if (!doc["cells"].is_array()) throw ConfigError("'cells' must be an array of filters");
        for (const json& f : doc["cells"]) {
            if (!f.is_string()) throw ConfigError("cell filters must be strings");
            cfg.cells.push_back(f.get<std::string>());
        }
        filter_cells(cfg.cells);  // validate now, not at run time
    }

    if (doc.contains("jobs")) {
        if (!doc["jobs"].is_number_integer() || doc["jobs"].get<int>() < 1) {
            throw ConfigError("'jobs' must be a positive integer");
        }
        cfg.jobs = doc["jobs"].get<int>();
    }
    return cfg;
}

ClusterCatalog load_clusters(const std::filesystem::path& path, double threshold_km) {
    if (!(threshold_km > 0.0)) throw ConfigError("cluster threshold must be positive");

    csv::Table table;
    try {
        table = csv::read_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    const int name_col = table.column("cluster");
    const int lat_col = table.column("lat");
    const int lon_col = table.column("lon");
    if (name_col < 0 || lat_col < 0 || lon_col < 0) {
        throw ConfigError("cluster catalog " + path.string() +
                          " must have columns cluster,lat,lon");
    }

    ClusterCatalog catalog;
    catalog.threshold_km = threshold_km;
    std::set<std::string> names;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::string where =
            path.string() + " row " + std::to_string(csv::Table::line_of_row(i));
        if (f.size() != table.header.size()) throw ConfigError(where + ": field count mismatch");
        ClusterSite c;
        c.name = f[static_cast<std::size_t>(name_col)];
        if (c.name.empty()) throw ConfigError(where + ": empty cluster name");
        if (!names.insert(c.name).second) {
            throw ConfigError(where + ": duplicate cluster '" + c.name + "'");
        }
        try {
            c.centroid = GeoPoint(csv::parse_double(f[static_cast<std::size_t>(lat_col)]),
                                  csv::parse_double(f[static_cast<std::size_t>(lon_col)]));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
        catalog.clusters.push_back(std::move(c));
    }
    if (catalog.clusters.empty()) throw ConfigError("cluster catalog " + path.string() + " is empty");
    return catalog;
}

}  // namespace gridcap
