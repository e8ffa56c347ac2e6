#include "gridcap/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridcap {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double haversine_rad(double lat_a, double lon_a, double cos_lat_a, double lat_b, double lon_b,
                     double cos_lat_b) {
    const double sin_dlat = std::sin((lat_b - lat_a) / 2.0);
    const double sin_dlon = std::sin((lon_b - lon_a) / 2.0);
    double h = sin_dlat * sin_dlat + cos_lat_a * cos_lat_b * sin_dlon * sin_dlon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    const double lat_a = a.lat() * kDegToRad;
    const double lat_b = b.lat() * kDegToRad;
    return haversine_rad(lat_a, a.lon() * kDegToRad, std::cos(lat_a), lat_b, b.lon() * kDegToRad,
                         std::cos(lat_b));
}

SubstationIndex::SubstationIndex(const std::vector<Substation>& substations) {
    entries_.reserve(substations.size());
    for (const Substation& sub : substations) {
        const double lat = sub.location.lat() * kDegToRad;
        entries_.push_back(Entry{sub.id, lat, sub.location.lon() * kDegToRad, std::cos(lat)});
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });
}

SubstationIndex::Hit SubstationIndex::nearest(const GeoPoint& point) const {
    if (entries_.empty()) throw RunError("nearest-substation query on an empty index");

    const double lat = point.lat() * kDegToRad;
    const double lon = point.lon() * kDegToRad;
    const double cos_lat = std::cos(lat);

    // Entries are sorted by id, so keeping only strict improvements breaks
    // distance ties towards the smallest id.
    const Entry* best = nullptr;
    double best_km = 0.0;
    for (const Entry& e : entries_) {
        const double km = haversine_rad(lat, lon, cos_lat, e.lat_rad, e.lon_rad, e.cos_lat);
        if (best == nullptr || km < best_km) {
            best = &e;
            best_km = km;
        }
    }
    return Hit{best->id, best_km};
}

std::map<std::string, SiteAssignment> assign_all(const std::vector<PointSite>& sites,
                                                 const SubstationIndex& index) {
    std::map<std::string, SiteAssignment> out;
    for (const PointSite& site : sites) {
        const auto hit = index.nearest(site.location);
        const auto [it, inserted] =
            out.emplace(site.id, SiteAssignment{hit.substation_id, hit.distance_km});
        if (!inserted) throw RunError("duplicate site id in assignment: " + site.id);
    }
    return out;
}

}  // namespace gridcap
