#include "gridcap/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>

namespace gridcap {

std::string_view to_label(ConstraintReason reason) {
    switch (reason) {
        case ConstraintReason::Unconstrained: return "Unconstrained";
        case ConstraintReason::SubstationAlreadyConstrained:
            return "SubstationAlreadyConstrained";
        case ConstraintReason::InsufficientHeadroom: return "InsufficientHeadroom";
    }
    throw Error("invalid ConstraintReason");
}

std::optional<ConstraintReason> parse_reason(std::string_view text) {
    for (ConstraintReason r :
         {ConstraintReason::Unconstrained, ConstraintReason::SubstationAlreadyConstrained,
          ConstraintReason::InsufficientHeadroom}) {
        if (text == to_label(r)) return r;
    }
    return std::nullopt;
}

double constrained_capacity_mw(double demand_mw, double headroom_mw) {
    if (headroom_mw > 0.0 && demand_mw > 0.0) return std::max(demand_mw - headroom_mw, 0.0);
    if (headroom_mw < 0.0 && demand_mw > 0.0) return std::fabs(headroom_mw) + demand_mw;
    return 0.0;
}

SubstationAllocation allocate_substation(const std::string& substation_id, double headroom_mw,
                                         std::vector<SiteDemand> demands, const Cell& cell) {
    if (!std::isfinite(headroom_mw)) {
        throw RunError("non-finite headroom for substation " + substation_id);
    }
    {
        std::set<std::string_view> seen;
        for (const SiteDemand& d : demands) {
            if (!seen.insert(d.site_id).second) {
                throw RunError("duplicate site id in allocation: " + d.site_id);
            }
        }
    }

    // Non-positive demands sort first; they are served trivially and leave
    // the ledger untouched, so running them through the same loop is fine.
    std::sort(demands.begin(), demands.end(), [](const SiteDemand& a, const SiteDemand& b) {
        if (a.demand_mw != b.demand_mw) return a.demand_mw < b.demand_mw;
        return a.site_id < b.site_id;
    });

    SubstationAllocation result;
    result.ledger = SubstationLedger{substation_id, headroom_mw, headroom_mw, {}};
    result.outcomes.reserve(demands.size());

    for (const SiteDemand& d : demands) {
        AllocationOutcome out;
        out.site_id = d.site_id;
        out.substation_id = substation_id;
        out.demand_mw = d.demand_mw;
        out.cell = cell;
        out.headroom_before_mw = result.ledger.remaining_headroom_mw;

        if (d.demand_mw <= 0.0) {
            out.constrained_mw = 0.0;
            out.reason = ConstraintReason::Unconstrained;
            result.outcomes.push_back(std::move(out));
            continue;
        }

        const double remaining = result.ledger.remaining_headroom_mw;
        out.constrained_mw = constrained_capacity_mw(d.demand_mw, remaining);
        if (remaining <= 0.0) {
            out.reason = ConstraintReason::SubstationAlreadyConstrained;
        } else if (d.demand_mw > remaining) {
            out.reason = ConstraintReason::InsufficientHeadroom;
        } else {
            out.reason = ConstraintReason::Unconstrained;
        }

        result.ledger.remaining_headroom_mw -= d.demand_mw;
        result.ledger.processed_site_ids.push_back(d.site_id);
        result.outcomes.push_back(std::move(out));
    }
    return result;
}

CellAllocation allocate_cell(const std::vector<PointSite>& sites,
                             const std::map<std::string, SiteAssignment>& assignment,
                             const std::vector<Substation>& substations, const Cell& cell) {
    std::map<std::string, const Substation*> by_id;
    for (const Substation& sub : substations) by_id.emplace(sub.id, &sub);

    std::map<std::string, std::vector<SiteDemand>> groups;
    for (const PointSite& site : sites) {
        const auto it = assignment.find(site.id);
        if (it == assignment.end()) {
            throw RunError("site " + site.id + " has no substation assignment");
        }
        const std::string& sub_id = it->second.substation_id;
        if (by_id.find(sub_id) == by_id.end()) {
            throw RunError("site " + site.id + " assigned to unknown substation " + sub_id);
        }
        groups[sub_id].push_back(SiteDemand{site.id, site.need.at(cell.year, cell.pathway)});
    }

    CellAllocation result;
    for (auto& [sub_id, demands] : groups) {
        const Substation& sub = *by_id.at(sub_id);
        auto alloc = allocate_substation(sub_id, sub.headroom.at(cell.year, cell.scenario),
                                         std::move(demands), cell);
        for (auto& out : alloc.outcomes) result.outcomes.push_back(std::move(out));
        result.ledgers.emplace(sub_id, std::move(alloc.ledger));
    }
    return result;
}

OracleResult oracle_allocate(double headroom_mw, const std::vector<SiteDemand>& demands,
                             AllocationObjective objective) {
    (void)objective;  // single objective today

    std::vector<SiteDemand> positive;
    for (const SiteDemand& d : demands) {
        if (d.demand_mw > 0.0) positive.push_back(d);
    }
    if (positive.size() > 20) {
        throw std::invalid_argument("oracle_allocate: instance too large (" +
                                    std::to_string(positive.size()) + " positive demands)");
    }
    std::sort(positive.begin(), positive.end(), [](const SiteDemand& a, const SiteDemand& b) {
        if (a.demand_mw != b.demand_mw) return a.demand_mw < b.demand_mw;
        return a.site_id < b.site_id;
    });

    OracleResult best;
    if (headroom_mw <= 0.0 || positive.empty()) return best;

    const std::size_t n = positive.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const int count = std::popcount(mask);
        if (count <= best.max_unconstrained) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) sum += positive[i].demand_mw;
        }
        if (sum <= headroom_mw) {
            best.max_unconstrained = count;
            best.chosen_site_ids.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) best.chosen_site_ids.push_back(positive[i].site_id);
            }
        }
    }
    return best;
}

}  // namespace gridcap
