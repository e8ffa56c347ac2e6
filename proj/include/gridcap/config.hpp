#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridcap/analysis.hpp"
#include "gridcap/core.hpp"

// Run configuration: one declarative JSON document; command-line flags
// override individual fields after loading.

namespace gridcap {

struct RunConfig {
    // Inputs for ingest.
    std::filesystem::path profiles;       // DNO profile document
    std::filesystem::path point_sites;    // raw point-site demand file
    std::filesystem::path nonpoint_sites; // raw regional non-point demand file
    std::filesystem::path clusters;       // cluster catalog (name, lat, lon)

    // Directories. dataset_dir holds the canonical files ingest writes and
    // run reads; out_dir holds the result set run writes and report reads.
    std::filesystem::path dataset_dir = "dataset";
    std::filesystem::path out_dir = "results";

    double power_factor = 0.9;
    double load_factor = 0.9;
    double cluster_threshold_km = 25.0;
    EmissionsBasis emissions_basis = EmissionsBasis::Year2030;
    std::vector<std::string> cells;  // cell filters; empty means all 27
    int jobs = 1;
};

// Loads and validates the configuration document. Relative paths are
// resolved against the document's directory. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

// Loads the cluster catalog (CSV: cluster,lat,lon). Throws ConfigError.
ClusterCatalog load_clusters(const std::filesystem::path& path, double threshold_km);

}  // namespace gridcap
