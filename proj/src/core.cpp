#include "gridcap/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace gridcap {

namespace {

// Lowercases and strips spaces, hyphens and underscores so that
// "Falling Short", "falling_short" and "FallingShort" compare equal.
std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '-' || c == '_' || c == '\t') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view text, const std::array<Enum, N>& values) {
    const std::string key = normalize(text);
    for (Enum v : values) {
        if (key == normalize(to_label(v))) return v;
    }
    return std::nullopt;
}

}  // namespace

int year_value(HorizonYear y) {
    switch (y) {
        case HorizonYear::Y2024: return 2024;
        case HorizonYear::Y2030: return 2030;
        case HorizonYear::Y2040: return 2040;
        case HorizonYear::Y2050: return 2050;
    }
    throw Error("invalid HorizonYear");
}

std::optional<HorizonYear> horizon_from_year(int calendar_year) {
    switch (calendar_year) {
        case 2024: return HorizonYear::Y2024;
        case 2030: return HorizonYear::Y2030;
        case 2040: return HorizonYear::Y2040;
        case 2050: return HorizonYear::Y2050;
        default: return std::nullopt;
    }
}

std::string_view to_label(NetworkScenario s) {
    switch (s) {
        case NetworkScenario::FallingShort: return "FallingShort";
        case NetworkScenario::ConsumerTransformation: return "ConsumerTransformation";
        case NetworkScenario::LeadingTheWay: return "LeadingTheWay";
    }
    throw Error("invalid NetworkScenario");
}

std::string_view to_label(Pathway p) {
    switch (p) {
        case Pathway::Balanced: return "Balanced";
        case Pathway::NoREEE: return "NoREEE";
        case Pathway::MaxElectrification: return "MaxElectrification";
    }
    throw Error("invalid Pathway");
}

std::string_view to_label(Region r) {
    switch (r) {
        case Region::NorthEast: return "NorthEast";
        case Region::NorthWest: return "NorthWest";
        case Region::YorkshireAndTheHumber: return "YorkshireAndTheHumber";
        case Region::EastMidlands: return "EastMidlands";
        case Region::WestMidlands: return "WestMidlands";
        case Region::EastOfEngland: return "EastOfEngland";
        case Region::London: return "London";
        case Region::SouthEast: return "SouthEast";
        case Region::SouthWest: return "SouthWest";
        case Region::Wales: return "Wales";
        case Region::Scotland: return "Scotland";
    }
    throw Error("invalid Region");
}

std::string_view to_label(Sector s) {
    switch (s) {
        case Sector::IronAndSteel: return "IronAndSteel";
        case Sector::Chemicals: return "Chemicals";
        case Sector::CementAndLime: return "CementAndLime";
        case Sector::FoodAndDrink: return "FoodAndDrink";
        case Sector::Glass: return "Glass";
        case Sector::Paper: return "Paper";
        case Sector::OtherMinerals: return "OtherMinerals";
        case Sector::NonFerrousMetals: return "NonFerrousMetals";
        case Sector::Vehicles: return "Vehicles";
        case Sector::OtherIndustry: return "OtherIndustry";
    }
    throw Error("invalid Sector");
}

std::string_view display_name(NetworkScenario s) {
    switch (s) {
        case NetworkScenario::FallingShort: return "Falling Short";
        case NetworkScenario::ConsumerTransformation: return "Consumer Transformation";
        case NetworkScenario::LeadingTheWay: return "Leading The Way";
    }
    throw Error("invalid NetworkScenario");
}

std::string_view display_name(Region r) {
    switch (r) {
        case Region::NorthEast: return "North East";
        case Region::NorthWest: return "North West";
        case Region::YorkshireAndTheHumber: return "Yorkshire and The Humber";
        case Region::EastMidlands: return "East Midlands";
        case Region::WestMidlands: return "West Midlands";
        case Region::EastOfEngland: return "East of England";
        case Region::London: return "London";
        case Region::SouthEast: return "South East";
        case Region::SouthWest: return "South West";
        case Region::Wales: return "Wales";
        case Region::Scotland: return "Scotland";
    }
    throw Error("invalid Region");
}

std::string_view display_name(Sector s) {
    switch (s) {
        case Sector::IronAndSteel: return "Iron and Steel";
        case Sector::Chemicals: return "Chemicals";
        case Sector::CementAndLime: return "Cement and Lime";
        case Sector::FoodAndDrink: return "Food and Drink";
        case Sector::Glass: return "Glass";
        case Sector::Paper: return "Paper";
        case Sector::OtherMinerals: return "Other Minerals";
        case Sector::NonFerrousMetals: return "Non-Ferrous Metals";
        case Sector::Vehicles: return "Vehicles";
        case Sector::OtherIndustry: return "Other Industry";
    }
    throw Error("invalid Sector");
}

std::optional<NetworkScenario> parse_scenario(std::string_view text) {
    return parse_enum(text, all_scenarios());
}

std::optional<Pathway> parse_pathway(std::string_view text) {
    // "No REEE" normalizes to the same key as the label.
    return parse_enum(text, all_pathways());
}

std::optional<Region> parse_region(std::string_view text) {
    const std::string key = normalize(text);
    for (Region r : all_regions()) {
        if (key == normalize(to_label(r)) || key == normalize(display_name(r))) return r;
    }
    return std::nullopt;
}

std::optional<Sector> parse_sector(std::string_view text) {
    const std::string key = normalize(text);
    for (Sector s : all_sectors()) {
        if (key == normalize(to_label(s)) || key == normalize(display_name(s))) return s;
    }
    return std::nullopt;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg) : lat_(lat_deg), lon_(lon_deg) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
        throw std::invalid_argument("GeoPoint: coordinates must be finite");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw std::invalid_argument("GeoPoint: latitude " + std::to_string(lat_deg) +
                                    " outside [-90, 90]");
    }
    if (lon_deg < -180.0 || lon_deg > 180.0) {
        throw std::invalid_argument("GeoPoint: longitude " + std::to_string(lon_deg) +
                                    " outside [-180, 180]");
    }
}

std::string cell_tag(const Cell& cell) {
    std::string tag = std::to_string(year_value(cell.year));
    tag += '_';
    tag += to_label(cell.scenario);
    tag += '_';
    tag += to_label(cell.pathway);
    return tag;
}

std::optional<Cell> cell_from_tag(std::string_view tag) {
    const auto first = tag.find('_');
    if (first == std::string_view::npos) return std::nullopt;
    const auto second = tag.find('_', first + 1);
    if (second == std::string_view::npos) return std::nullopt;

    int year = 0;
    try {
        year = std::stoi(std::string(tag.substr(0, first)));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    const auto y = horizon_from_year(year);
    const auto s = parse_scenario(tag.substr(first + 1, second - first - 1));
    const auto p = parse_pathway(tag.substr(second + 1));
    if (!y || !s || !p) return std::nullopt;
    return Cell{*y, *s, *p};
}

std::vector<Cell> scenario_grid() {
    std::vector<Cell> cells;
    cells.reserve(kAnalysisYearCount * kScenarioCount * kPathwayCount);
    for (HorizonYear y : analysis_years()) {
        for (NetworkScenario s : all_scenarios()) {
            for (Pathway p : all_pathways()) {
                cells.push_back(Cell{y, s, p});
            }
        }
    }
    return cells;
}

std::vector<Cell> filter_cells(const std::vector<std::string>& filters) {
    const std::vector<Cell> grid = scenario_grid();
    if (filters.empty()) return grid;

    std::set<Cell> wanted;
    for (const std::string& filter : filters) {
        const auto first = filter.find(':');
        const auto second = first == std::string::npos ? std::string::npos
                                                       : filter.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            throw ConfigError("cell filter '" + filter +
                              "' is not of the form year:scenario:pathway");
        }
        const std::string year_part = filter.substr(0, first);
        const std::string scen_part = filter.substr(first + 1, second - first - 1);
        const std::string path_part = filter.substr(second + 1);

        std::optional<HorizonYear> year;
        if (year_part != "*") {
            try {
                year = horizon_from_year(std::stoi(year_part));
            } catch (const std::exception&) {
                year = std::nullopt;
            }
            if (!year) throw ConfigError("cell filter '" + filter + "': unknown year");
            if (*year == kBaselineYear) {
                throw ConfigError("cell filter '" + filter +
                                  "': the baseline year is not an analysis cell");
            }
        }
        std::optional<NetworkScenario> scenario;
        if (scen_part != "*") {
            scenario = parse_scenario(scen_part);
            if (!scenario) throw ConfigError("cell filter '" + filter + "': unknown scenario");
        }
        std::optional<Pathway> pathway;
        if (path_part != "*") {
            pathway = parse_pathway(path_part);
            if (!pathway) throw ConfigError("cell filter '" + filter + "': unknown pathway");
        }

        for (const Cell& cell : grid) {
            if (year && cell.year != *year) continue;
            if (scenario && cell.scenario != *scenario) continue;
            if (pathway && cell.pathway != *pathway) continue;
            wanted.insert(cell);
        }
    }

    std::vector<Cell> out;
    for (const Cell& cell : grid) {
        if (wanted.count(cell) != 0) out.push_back(cell);
    }
    return out;
}

}  // namespace gridcap
