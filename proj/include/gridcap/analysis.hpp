#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridcap/allocation.hpp"
#include "gridcap/core.hpp"
#include "gridcap/geo.hpp"

// Regional and GB-level aggregation, emissions-at-risk, cluster/dispersed
// classification, sector shares, and the full scenario matrix.

namespace gridcap {

// Per-region capacity position for one cell. Headroom is summed signed:
// an over-committed substation reduces the regional total. Need rectifies
// per record: a site whose demand falls below the baseline contributes
// zero, it does not offset growth elsewhere.
struct RegionalBalance {
    Region region = Region::NorthEast;
    Cell cell;
    double regional_headroom_mw = 0.0;
    double industrial_need_mw = 0.0;
    double balance_mw = 0.0;                // regional_headroom - industrial_need
    double unmet_industrial_need_mw = 0.0;  // max(need - max(headroom, 0), 0)
};

RegionalBalance regional_balance(const Dataset& data, Region region, const Cell& cell);

// All 11 regions in declaration order.
std::vector<RegionalBalance> all_regional_balances(const Dataset& data, const Cell& cell);

struct ReasonCounts {
    int unconstrained = 0;
    int already_constrained = 0;
    int insufficient_headroom = 0;

    int constrained() const { return already_constrained + insufficient_headroom; }
    int total() const { return unconstrained + constrained(); }
};

ReasonCounts count_reasons(const std::vector<AllocationOutcome>& outcomes);

// GB-level totals for one cell. Two shortfall notions coexist and are both
// reported: regional_shortfall rectifies per region (headroom does not
// transport between regions at distribution level), network_shortfall is
// the rectified GB net position (the aggregate the development plans
// describe). unmet_industrial_need is the industrial demand growth the
// existing network cannot serve; total_capacity_need adds the network's own
// shortfall on top.
struct GBSummary {
    Cell cell;
    double total_headroom_mw = 0.0;              // signed, all substations
    double network_shortfall_mw = 0.0;           // max(-total_headroom, 0)
    double regional_shortfall_mw = 0.0;          // sum of max(-balance, 0) per region
    double industrial_need_total_mw = 0.0;       // rectified, point + non-point
    double industrial_need_net_mw = 0.0;         // signed, point + non-point
    double unmet_industrial_need_mw = 0.0;       // sum of regional unmet
    double total_capacity_need_mw = 0.0;         // network_shortfall + unmet
    double point_need_total_mw = 0.0;            // rectified point-site needs
    double point_constrained_capacity_mw = 0.0;  // sum of constrained_mw
    double nearest_substation_shortfall_mw = 0.0;  // negative headroom at nearest substations
    double point_total_need_mw = 0.0;  // point constrained capacity + nearest shortfall
    ReasonCounts reasons;

    // Constrained fraction of point sites; nullopt when there are none.
    std::optional<double> constrained_share() const;
};

// Totals for one cell from its regional balances and allocation. Throws
// RunError unless exactly the 11 regions are present, all for this cell.
GBSummary gb_summary(const std::vector<RegionalBalance>& balances,
                     const CellAllocation& allocation, const Dataset& data, const Cell& cell);

enum class EmissionsBasis {
    Year2030,  // 2030 pathway emissions of constrained sites (headline)
    Year2024,  // reported 2024 emissions (sensitivity variant)
};

struct EmissionsAtRisk {
    double at_risk_mt = 0.0;
    double total_mt = 0.0;                // same basis, all point sites
    std::optional<double> share;          // at_risk / total, nullopt when total is 0
    EmissionsBasis basis = EmissionsBasis::Year2030;
};

// Emissions of the sites whose outcome in this cell is constrained (reason
// != Unconstrained). Under the 2030 basis the pathway column matching the
// cell's pathway is used. Throws RunError when an outcome references an
// unknown site.
EmissionsAtRisk emissions_at_risk(const std::vector<PointSite>& sites,
                                  const std::vector<AllocationOutcome>& outcomes,
                                  Pathway pathway, EmissionsBasis basis);

struct ClusterSite {
    std::string name;
    GeoPoint centroid;
};

// Named industrial clusters and the dispersal threshold. The catalog is
// input data, not computed.
struct ClusterCatalog {
    std::vector<ClusterSite> clusters;
    double threshold_km = 25.0;
};

enum class LocationClass { Cluster, Dispersed };

std::string_view to_label(LocationClass c);

// Dispersed iff the site is at least threshold_km from every cluster
// centroid. Throws RunError on an empty catalog or non-positive threshold.
LocationClass classify_site_location(const PointSite& site, const ClusterCatalog& catalog);

// Constrained and total point-site counts by location class for one cell.
struct LocationSplit {
    int cluster_total = 0;
    int cluster_constrained = 0;
    int dispersed_total = 0;
    int dispersed_constrained = 0;
};

LocationSplit location_split(const std::vector<PointSite>& sites,
                             const std::vector<AllocationOutcome>& outcomes,
                             const ClusterCatalog& catalog);

// Same split from classifications computed once up front.
LocationSplit location_split(const std::map<std::string, LocationClass>& classes,
                             const std::vector<AllocationOutcome>& outcomes);

// Per-sector ratio of 2030 emissions of constrained sites to all point
// 2030 emissions in that sector, under the cell's pathway. Sectors with no
// emissions report nullopt, not zero.
std::array<std::optional<double>, kSectorCount> sector_constrained_share(
    const std::vector<PointSite>& sites, const std::vector<AllocationOutcome>& outcomes,
    Pathway pathway);

struct RunOptions {
    std::vector<Cell> cells;  // empty means the full 27-cell grid
    double cluster_threshold_km = 25.0;
    EmissionsBasis emissions_basis = EmissionsBasis::Year2030;
    int jobs = 1;
};

// Everything computed for one cell.
struct CellResult {
    Cell cell;
    std::vector<AllocationOutcome> outcomes;
    std::map<std::string, SubstationLedger> ledgers;
    std::vector<RegionalBalance> balances;
    GBSummary summary;
    EmissionsAtRisk emissions;
    std::array<std::optional<double>, kSectorCount> sector_shares{};
    LocationSplit split;
};

struct MatrixResult {
    std::map<std::string, SiteAssignment> assignment;
    std::map<std::string, LocationClass> site_class;
    std::vector<CellResult> cells;  // canonical grid order
};

// Assigns every site to its nearest substation once (locations are
// time-invariant), then runs allocation and aggregation for every requested
// cell. Cells are independent; up to options.jobs are computed
// concurrently, and results are returned in canonical order regardless of
// the parallelism degree.
MatrixResult run_matrix(const Dataset& data, const ClusterCatalog& catalog,
                        const RunOptions& options);

}  // namespace gridcap
