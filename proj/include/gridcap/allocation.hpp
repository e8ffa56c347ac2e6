#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcap/core.hpp"
#include "gridcap/geo.hpp"

// Per-site constrained capacity under the piecewise rule, greedy
// smallest-demand-first headroom allocation per substation, and an
// exhaustive small-instance oracle used to verify the greedy strategy.

namespace gridcap {

enum class ConstraintReason {
    Unconstrained,
    SubstationAlreadyConstrained,
    InsufficientHeadroom,
};

std::string_view to_label(ConstraintReason reason);
std::optional<ConstraintReason> parse_reason(std::string_view text);

// The piecewise constrained-capacity rule:
//   headroom > 0 and demand > 0  ->  max(demand - headroom, 0)
//   headroom < 0 and demand > 0  ->  |headroom| + demand
//   otherwise                    ->  0
// Note the otherwise branch covers headroom == 0 even for positive demand.
double constrained_capacity_mw(double demand_mw, double headroom_mw);

struct SiteDemand {
    std::string site_id;
    double demand_mw = 0.0;
};

struct AllocationOutcome {
    std::string site_id;
    std::string substation_id;
    double demand_mw = 0.0;
    double constrained_mw = 0.0;
    ConstraintReason reason = ConstraintReason::Unconstrained;
    Cell cell;
    // Remaining headroom at the moment this site was processed.
    double headroom_before_mw = 0.0;
};

struct SubstationLedger {
    std::string substation_id;
    double initial_headroom_mw = 0.0;
    double remaining_headroom_mw = 0.0;
    std::vector<std::string> processed_site_ids;  // positive-demand sites, in order
};

struct SubstationAllocation {
    std::vector<AllocationOutcome> outcomes;  // in processing order
    SubstationLedger ledger;
};

// Allocates one substation's headroom across the sites assigned to it.
// Sites with non-positive demand are Unconstrained and leave the ledger
// untouched. The rest are processed in ascending demand order (ties by
// site id): the piecewise rule is evaluated against the remaining headroom,
// the reason recorded, and the ledger then decremented by the full demand
// even when the site came out constrained, so later sites can meet an
// already-negative ledger. Throws on duplicate site ids.
SubstationAllocation allocate_substation(const std::string& substation_id, double headroom_mw,
                                         std::vector<SiteDemand> demands, const Cell& cell);

struct CellAllocation {
    std::vector<AllocationOutcome> outcomes;        // by (substation id, processing order)
    std::map<std::string, SubstationLedger> ledgers;  // substations with assigned sites
};

// Runs allocate_substation for every substation that has assigned sites,
// with that substation's headroom for (cell.year, cell.scenario) and each
// site's demand for (cell.year, cell.pathway). Ledgers are per cell: no
// carry-over between years, scenarios or pathways.
CellAllocation allocate_cell(const std::vector<PointSite>& sites,
                             const std::map<std::string, SiteAssignment>& assignment,
                             const std::vector<Substation>& substations, const Cell& cell);

enum class AllocationObjective {
    MaxUnconstrainedCount,
};

struct OracleResult {
    int max_unconstrained = 0;
    std::vector<std::string> chosen_site_ids;
};

// Exhaustively enumerates subsets of the positive-demand sites and returns
// one of maximal cardinality whose total demand fits within the headroom
// (the empty subset when headroom <= 0). Test oracle for the claim that
// smallest-first allocation minimises the number of constrained sites.
// Throws when more than 20 positive demands are given.
OracleResult oracle_allocate(double headroom_mw, const std::vector<SiteDemand>& demands,
                             AllocationObjective objective = AllocationObjective::MaxUnconstrainedCount);

}  // namespace gridcap
