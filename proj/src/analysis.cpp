#include "gridcap/analysis.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace gridcap {

RegionalBalance regional_balance(const Dataset& data, Region region, const Cell& cell) {
    RegionalBalance rb;
    rb.region = region;
    rb.cell = cell;

    for (const Substation& sub : data.substations) {
        if (sub.region != region) continue;
        rb.regional_headroom_mw += sub.headroom.at(cell.year, cell.scenario);
    }
    for (const PointSite& site : data.sites) {
        if (site.region != region) continue;
        rb.industrial_need_mw += std::max(site.need.at(cell.year, cell.pathway), 0.0);
    }
    for (const RegionalNonPointDemand& rec : data.nonpoint) {
        if (rec.region != region) continue;
        rb.industrial_need_mw += std::max(rec.need.at(cell.year, cell.pathway), 0.0);
    }

    rb.balance_mw = rb.regional_headroom_mw - rb.industrial_need_mw;
    rb.unmet_industrial_need_mw =
        std::max(rb.industrial_need_mw - std::max(rb.regional_headroom_mw, 0.0), 0.0);
    return rb;
}

std::vector<RegionalBalance> all_regional_balances(const Dataset& data, const Cell& cell) {
    std::vector<RegionalBalance> out;
    out.reserve(kRegionCount);
    for (Region r : all_regions()) out.push_back(regional_balance(data, r, cell));
    return out;
}

ReasonCounts count_reasons(const std::vector<AllocationOutcome>& outcomes) {
    ReasonCounts counts;
    for (const AllocationOutcome& out : outcomes) {
        switch (out.reason) {
            case ConstraintReason::Unconstrained: ++counts.unconstrained; break;
            case ConstraintReason::SubstationAlreadyConstrained:
                ++counts.already_constrained;
                break;
            case ConstraintReason::InsufficientHeadroom: ++counts.insufficient_headroom; break;
        }
    }
    return counts;
}

std::optional<double> GBSummary::constrained_share() const {
    const int total = reasons.total();
    if (total == 0) return std::nullopt;
    return static_cast<double>(reasons.constrained()) / static_cast<double>(total);
}

GBSummary gb_summary(const std::vector<RegionalBalance>& balances,
                     const CellAllocation& allocation, const Dataset& data, const Cell& cell) {
    std::set<Region> seen;
    for (const RegionalBalance& rb : balances) {
        if (rb.cell != cell) {
            throw RunError("regional balance for cell " + cell_tag(rb.cell) +
                           " mixed into summary for " + cell_tag(cell));
        }
        if (!seen.insert(rb.region).second) {
            throw RunError("duplicate regional balance for " +
                           std::string(to_label(rb.region)));
        }
    }
    if (seen.size() != static_cast<std::size_t>(kRegionCount)) {
        for (Region r : all_regions()) {
            if (!seen.count(r)) {
                throw RunError("missing regional balance for " + std::string(to_label(r)));
            }
        }
    }

    GBSummary s;
    s.cell = cell;
    for (const RegionalBalance& rb : balances) {
        s.total_headroom_mw += rb.regional_headroom_mw;
        s.regional_shortfall_mw += std::max(-rb.balance_mw, 0.0);
        s.industrial_need_total_mw += rb.industrial_need_mw;
        s.unmet_industrial_need_mw += rb.unmet_industrial_need_mw;
    }
    s.network_shortfall_mw = std::max(-s.total_headroom_mw, 0.0);
    s.total_capacity_need_mw = s.network_shortfall_mw + s.unmet_industrial_need_mw;

    for (const PointSite& site : data.sites) {
        const double need = site.need.at(cell.year, cell.pathway);
        s.industrial_need_net_mw += need;
        s.point_need_total_mw += std::max(need, 0.0);
    }
    for (const RegionalNonPointDemand& rec : data.nonpoint) {
        s.industrial_need_net_mw += rec.need.at(cell.year, cell.pathway);
    }

    for (const AllocationOutcome& out : allocation.outcomes) {
        s.point_constrained_capacity_mw += out.constrained_mw;
    }
    for (const auto& [id, ledger] : allocation.ledgers) {
        s.nearest_substation_shortfall_mw += std::max(-ledger.initial_headroom_mw, 0.0);
    }
    s.point_total_need_mw = s.point_constrained_capacity_mw + s.nearest_substation_shortfall_mw;
    s.reasons = count_reasons(allocation.outcomes);
    return s;
}

EmissionsAtRisk emissions_at_risk(const std::vector<PointSite>& sites,
                                  const std::vector<AllocationOutcome>& outcomes,
                                  Pathway pathway, EmissionsBasis basis) {
    const auto emissions_of = [&](const PointSite& site) {
        return basis == EmissionsBasis::Year2030
                   ? site.emissions_2030_mt[static_cast<std::size_t>(pathway_index(pathway))]
                   : site.emissions_2024_mt;
    };

    std::map<std::string, const PointSite*> by_id;
    EmissionsAtRisk result;
    result.basis = basis;
    for (const PointSite& site : sites) {
        by_id.emplace(site.id, &site);
        result.total_mt += emissions_of(site);
    }

    for (const AllocationOutcome& out : outcomes) {
        if (out.reason == ConstraintReason::Unconstrained) continue;
        const auto it = by_id.find(out.site_id);
        if (it == by_id.end()) {
            throw RunError("constrained site " + out.site_id + " has no emissions record");
        }
        result.at_risk_mt += emissions_of(*it->second);
    }
    if (result.total_mt > 0.0) result.share = result.at_risk_mt / result.total_mt;
    return result;
}

std::string_view to_label(LocationClass c) {
    switch (c) {
        case LocationClass::Cluster: return "Cluster";
        case LocationClass::Dispersed: return "Dispersed";
    }
    throw Error("invalid LocationClass");
}

LocationClass classify_site_location(const PointSite& site, const ClusterCatalog& catalog) {
    if (catalog.clusters.empty()) throw RunError("cluster catalog is empty");
    if (!(catalog.threshold_km > 0.0)) {
        throw RunError("cluster distance threshold must be positive");
    }
    for (const ClusterSite& c : catalog.clusters) {
        if (haversine_km(site.location, c.centroid) < catalog.threshold_km) {
            return LocationClass::Cluster;
        }
    }
    return LocationClass::Dispersed;
}

LocationSplit location_split(const std::vector<PointSite>& sites,
                             const std::vector<AllocationOutcome>& outcomes,
                             const ClusterCatalog& catalog) {
    std::map<std::string, LocationClass> classes;
    for (const PointSite& site : sites) {
        classes.emplace(site.id, classify_site_location(site, catalog));
    }
    return location_split(classes, outcomes);
}

LocationSplit location_split(const std::map<std::string, LocationClass>& classes,
                             const std::vector<AllocationOutcome>& outcomes) {
    std::set<std::string_view> constrained;
    for (const AllocationOutcome& out : outcomes) {
        if (out.reason != ConstraintReason::Unconstrained) constrained.insert(out.site_id);
    }

    LocationSplit split;
    for (const auto& [site_id, cls] : classes) {
        const bool is_constrained = constrained.count(site_id) > 0;
        if (cls == LocationClass::Cluster) {
            ++split.cluster_total;
            if (is_constrained) ++split.cluster_constrained;
        } else {
            ++split.dispersed_total;
            if (is_constrained) ++split.dispersed_constrained;
        }
    }
    return split;
}

std::array<std::optional<double>, kSectorCount> sector_constrained_share(
    const std::vector<PointSite>& sites, const std::vector<AllocationOutcome>& outcomes,
    Pathway pathway) {
    std::set<std::string_view> constrained;
    for (const AllocationOutcome& out : outcomes) {
        if (out.reason != ConstraintReason::Unconstrained) constrained.insert(out.site_id);
    }

    std::array<double, kSectorCount> at_risk{};
    std::array<double, kSectorCount> total{};
    for (const PointSite& site : sites) {
        const auto sector = static_cast<std::size_t>(sector_index(site.sector));
        const double mt =
            site.emissions_2030_mt[static_cast<std::size_t>(pathway_index(pathway))];
        total[sector] += mt;
        if (constrained.count(site.id)) at_risk[sector] += mt;
    }

    std::array<std::optional<double>, kSectorCount> shares{};
    for (std::size_t i = 0; i < static_cast<std::size_t>(kSectorCount); ++i) {
        if (total[i] > 0.0) shares[i] = at_risk[i] / total[i];
    }
    return shares;
}

namespace {

CellResult compute_cell(const Dataset& data, const std::map<std::string, SiteAssignment>& assignment,
                        const std::map<std::string, LocationClass>& classes,
                        const RunOptions& options, const Cell& cell) {
    CellResult result;
    result.cell = cell;

    CellAllocation alloc = allocate_cell(data.sites, assignment, data.substations, cell);
    result.balances = all_regional_balances(data, cell);
    result.summary = gb_summary(result.balances, alloc, data, cell);
    result.emissions =
        emissions_at_risk(data.sites, alloc.outcomes, cell.pathway, options.emissions_basis);
    result.sector_shares = sector_constrained_share(data.sites, alloc.outcomes, cell.pathway);
    result.split = location_split(classes, alloc.outcomes);
    result.outcomes = std::move(alloc.outcomes);
    result.ledgers = std::move(alloc.ledgers);
    return result;
}

}  // namespace

MatrixResult run_matrix(const Dataset& data, const ClusterCatalog& catalog,
                        const RunOptions& options) {
    if (data.substations.empty()) throw RunError("no substations in canonical data");
    if (options.jobs < 1) throw RunError("parallelism degree must be at least 1");

    ClusterCatalog effective = catalog;
    effective.threshold_km = options.cluster_threshold_km;

    MatrixResult result;
    const SubstationIndex index(data.substations);
    result.assignment = assign_all(data.sites, index);
    for (const PointSite& site : data.sites) {
        result.site_class.emplace(site.id, classify_site_location(site, effective));
    }

    const std::vector<Cell> cells = options.cells.empty() ? scenario_grid() : options.cells;
    result.cells.resize(cells.size());

    // Waves of at most `jobs` concurrent cells; each task writes only its
    // own slot, so the result order is the cell order, not completion order.
    const std::size_t jobs = static_cast<std::size_t>(options.jobs);
    for (std::size_t base = 0; base < cells.size(); base += jobs) {
        const std::size_t end = std::min(base + jobs, cells.size());
        std::vector<std::future<void>> wave;
        wave.reserve(end - base);
        for (std::size_t i = base; i < end; ++i) {
            wave.push_back(std::async(std::launch::async, [&, i] {
                result.cells[i] =
                    compute_cell(data, result.assignment, result.site_class, options, cells[i]);
            }));
        }
        for (std::future<void>& f : wave) f.get();
    }
    return result;
}

}  // namespace gridcap
