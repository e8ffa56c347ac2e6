#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcap/core.hpp"

// Great-circle geometry and nearest-substation search.

namespace gridcap {

inline constexpr double kEarthRadiusKm = 6371.0;

// Haversine great-circle distance in km. Degrees are converted to radians
// here and nowhere else; the asin argument is clamped to [0, 1] to guard
// against floating-point overshoot near antipodal pairs.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Nearest-point queries over a fixed substation set. A linear scan is exact
// and fast enough at GB scale (a few thousand substations); the contract is
// equality with a brute-force argmin, with distance ties broken by
// lexicographically smallest id. Immutable after construction, safe for
// concurrent queries.
class SubstationIndex {
  public:
    explicit SubstationIndex(const std::vector<Substation>& substations);

    struct Hit {
        std::string substation_id;
        double distance_km = 0.0;
    };

    // Throws RunError when the index is empty.
    Hit nearest(const GeoPoint& point) const;
    std::size_t size() const { return entries_.size(); }

  private:
    struct Entry {
        std::string id;
        double lat_rad;
        double lon_rad;
        double cos_lat;
    };
    std::vector<Entry> entries_;  // sorted by id
};

struct SiteAssignment {
    std::string substation_id;
    double distance_km = 0.0;
};

// Maps every site to its nearest substation. Locations are time-invariant,
// so one assignment serves all analysis cells.
std::map<std::string, SiteAssignment> assign_all(const std::vector<PointSite>& sites,
                                                 const SubstationIndex& index);

}  // namespace gridcap
