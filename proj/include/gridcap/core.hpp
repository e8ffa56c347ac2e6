#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Canonical domain types shared by every other module: closed enumerations
// for the scenario space, validated geographic points, and the harmonized
// substation / industrial-site records. Everything here is immutable after
// construction and safe to share across threads.

namespace gridcap {

// Error hierarchy. The CLI maps these to distinct exit codes.
class Error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class ConfigError : public Error {
    using Error::Error;
};
class IngestError : public Error {
    using Error::Error;
};
class RunError : public Error {
    using Error::Error;
};
class ReportError : public Error {
    using Error::Error;
};

// Electricity-network demand scenarios used by all network operators.
enum class NetworkScenario {
    FallingShort,
    ConsumerTransformation,
    LeadingTheWay,
};

// Industrial decarbonisation pathways.
enum class Pathway {
    Balanced,
    NoREEE,
    MaxElectrification,
};

// Study years. Y2024 is the unique baseline; the rest are analysis horizons.
enum class HorizonYear {
    Y2024,
    Y2030,
    Y2040,
    Y2050,
};

// The 9 English regions plus Wales and Scotland.
enum class Region {
    NorthEast,
    NorthWest,
    YorkshireAndTheHumber,
    EastMidlands,
    WestMidlands,
    EastOfEngland,
    London,
    SouthEast,
    SouthWest,
    Wales,
    Scotland,
};

// Manufacturing sectors covered by the analysis.
enum class Sector {
    IronAndSteel,
    Chemicals,
    CementAndLime,
    FoodAndDrink,
    Glass,
    Paper,
    OtherMinerals,
    NonFerrousMetals,
    Vehicles,
    OtherIndustry,
};

inline constexpr int kScenarioCount = 3;
inline constexpr int kPathwayCount = 3;
inline constexpr int kYearCount = 4;  // includes the 2024 baseline
inline constexpr int kAnalysisYearCount = 3;
inline constexpr int kRegionCount = 11;
inline constexpr int kSectorCount = 10;
inline constexpr HorizonYear kBaselineYear = HorizonYear::Y2024;

constexpr std::array<NetworkScenario, kScenarioCount> all_scenarios() {
    return {NetworkScenario::FallingShort, NetworkScenario::ConsumerTransformation,
            NetworkScenario::LeadingTheWay};
}
constexpr std::array<Pathway, kPathwayCount> all_pathways() {
    return {Pathway::Balanced, Pathway::NoREEE, Pathway::MaxElectrification};
}
constexpr std::array<HorizonYear, kYearCount> all_years() {
    return {HorizonYear::Y2024, HorizonYear::Y2030, HorizonYear::Y2040, HorizonYear::Y2050};
}
constexpr std::array<HorizonYear, kAnalysisYearCount> analysis_years() {
    return {HorizonYear::Y2030, HorizonYear::Y2040, HorizonYear::Y2050};
}
constexpr std::array<Region, kRegionCount> all_regions() {
    return {Region::NorthEast,    Region::NorthWest,  Region::YorkshireAndTheHumber,
            Region::EastMidlands, Region::WestMidlands, Region::EastOfEngland,
            Region::London,       Region::SouthEast,  Region::SouthWest,
            Region::Wales,        Region::Scotland};
}
constexpr std::array<Sector, kSectorCount> all_sectors() {
    return {Sector::IronAndSteel, Sector::Chemicals, Sector::CementAndLime,
            Sector::FoodAndDrink, Sector::Glass,     Sector::Paper,
            Sector::OtherMinerals, Sector::NonFerrousMetals, Sector::Vehicles,
            Sector::OtherIndustry};
}

constexpr int scenario_index(NetworkScenario s) { return static_cast<int>(s); }
constexpr int pathway_index(Pathway p) { return static_cast<int>(p); }
constexpr int year_index(HorizonYear y) { return static_cast<int>(y); }
constexpr int region_index(Region r) { return static_cast<int>(r); }
constexpr int sector_index(Sector s) { return static_cast<int>(s); }

int year_value(HorizonYear y);
std::optional<HorizonYear> horizon_from_year(int calendar_year);

// Compact labels ("FallingShort", "NoREEE", ...) used in file columns,
// cell tags and configuration documents.
std::string_view to_label(NetworkScenario s);
std::string_view to_label(Pathway p);
std::string_view to_label(Region r);
std::string_view to_label(Sector s);

// Display names as they appear in source datasets ("Falling Short",
// "Yorkshire and The Humber", "Non-Ferrous Metals", ...).
std::string_view display_name(NetworkScenario s);
std::string_view display_name(Region r);
std::string_view display_name(Sector s);

// Parsers accept either form, case-insensitively and ignoring spaces,
// hyphens and underscores. The sets stay closed: anything else is nullopt.
std::optional<NetworkScenario> parse_scenario(std::string_view text);
std::optional<Pathway> parse_pathway(std::string_view text);
std::optional<Region> parse_region(std::string_view text);
std::optional<Sector> parse_sector(std::string_view text);

// A WGS84-style coordinate pair in degrees. Construction enforces finite
// values with lat in [-90, 90] and lon in [-180, 180].
class GeoPoint {
  public:
    GeoPoint() = default;
    GeoPoint(double lat_deg, double lon_deg);
    double lat() const { return lat_; }
    double lon() const { return lon_; }

  private:
    double lat_ = 0.0;
    double lon_ = 0.0;
};

// One analysis cell of the study matrix.
struct Cell {
    HorizonYear year = kBaselineYear;
    NetworkScenario scenario = NetworkScenario::FallingShort;
    Pathway pathway = Pathway::Balanced;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

// "2030_FallingShort_Balanced"
std::string cell_tag(const Cell& cell);
std::optional<Cell> cell_from_tag(std::string_view tag);

// The 27 analysis cells (3 horizon years x 3 network scenarios x
// 3 pathways) in canonical order: years ascending, scenarios and pathways
// in declaration order. The baseline year sits outside the grid; there all
// capacity needs are zero by construction.
std::vector<Cell> scenario_grid();

// Selects a subset of the grid from filters like "2050:LeadingTheWay:Balanced"
// or "2040:*:*". Returns cells in canonical grid order without duplicates.
std::vector<Cell> filter_cells(const std::vector<std::string>& filters);

// Total map (year, scenario) -> demand headroom in MW. Negative values mean
// the substation is already over-committed.
class HeadroomTable {
  public:
    HeadroomTable() = default;
    explicit HeadroomTable(const std::array<double, kYearCount * kScenarioCount>& mw)
        : mw_(mw) {}

    double at(HorizonYear y, NetworkScenario s) const {
        return mw_[static_cast<std::size_t>(index(y, s))];
    }
    void set(HorizonYear y, NetworkScenario s, double mw) {
        mw_[static_cast<std::size_t>(index(y, s))] = mw;
    }
    static constexpr int index(HorizonYear y, NetworkScenario s) {
        return year_index(y) * kScenarioCount + scenario_index(s);
    }

  private:
    std::array<double, kYearCount * kScenarioCount> mw_{};
};

// Additional capacity need in MW by (year, pathway), stored relative to the
// 2024 baseline. The baseline year reads as exactly zero by construction;
// analysis years may be negative when efficiency measures cut demand below
// the baseline.
class NeedTable {
  public:
    NeedTable() = default;
    explicit NeedTable(const std::array<double, kAnalysisYearCount * kPathwayCount>& mw)
        : mw_(mw) {}

    double at(HorizonYear y, Pathway p) const {
        if (y == kBaselineYear) return 0.0;
        return mw_[static_cast<std::size_t>(index(y, p))];
    }
    void set(HorizonYear y, Pathway p, double mw) {
        mw_[static_cast<std::size_t>(index(y, p))] = mw;
    }
    static constexpr int index(HorizonYear y, Pathway p) {
        return (year_index(y) - 1) * kPathwayCount + pathway_index(p);
    }

  private:
    std::array<double, kAnalysisYearCount * kPathwayCount> mw_{};
};

// A distribution-network node with per-(year, scenario) demand headroom.
struct Substation {
    std::string id;
    std::string dno;
    Region region = Region::NorthEast;
    GeoPoint location;
    double voltage_kv = 0.0;
    HeadroomTable headroom;
};

// A large industrial emissions point source with a known location.
struct PointSite {
    std::string id;
    Sector sector = Sector::OtherIndustry;
    Region region = Region::NorthEast;
    GeoPoint location;
    NeedTable need;
    std::array<double, kPathwayCount> emissions_2030_mt{};
    double emissions_2024_mt = 0.0;
};

// Aggregate capacity need of smaller sites known only by region and sector.
struct RegionalNonPointDemand {
    Region region = Region::NorthEast;
    Sector sector = Sector::OtherIndustry;
    NeedTable need;
};

// The harmonized dataset every downstream module consumes. Substations and
// sites are sorted by id, non-point demand by (region, sector).
struct Dataset {
    std::vector<Substation> substations;
    std::vector<PointSite> sites;
    std::vector<RegionalNonPointDemand> nonpoint;
};

}  // namespace gridcap
