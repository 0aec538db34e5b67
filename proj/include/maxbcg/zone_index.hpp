#ifndef MAXBCG_ZONE_INDEX_HPP
#define MAXBCG_ZONE_INDEX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "maxbcg/catalog.hpp"

namespace maxbcg {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

struct ZoneConfig {
    double zone_height = 30.0 / 3600.0;  // degrees
    double epsilon = 1e-9;               // divide-by-zero guard
    /// Scales every ra half-width. Anything but 1 breaks correctness; exists
    /// so the oracle harness can prove it notices a broken window.
    double ra_window_scale = 1.0;

    void validate() const;
};

struct UnitVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline int zone_of(double dec, const ZoneConfig& config) {
    return static_cast<int>(std::floor((dec + 90.0) / config.zone_height));
}

inline UnitVector unit_vector(double ra, double dec) {
    const double cd = std::cos(dec * kDegToRad);
    return {cd * std::cos(ra * kDegToRad), cd * std::sin(ra * kDegToRad), std::sin(dec * kDegToRad)};
}

// The three helpers below are the single definition of the distance metric;
// the index and the brute-force oracle both call them so their results are
// bitwise comparable.

inline double chord_squared(const UnitVector& a, const UnitVector& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Squared chord of a cone with opening radius r degrees.
inline double chord_cutoff(double r) {
    const double s = std::sin(r / 2.0 * kDegToRad);
    return 4.0 * s * s;
}

/// Chord length expressed in degrees (small-angle reading of the chord).
inline double chord_degrees(double chord2) { return std::sqrt(chord2) / kDegToRad; }

struct ZoneEntry {
    int zone_id = 0;
    ObjId objid = 0;
    double ra = 0.0;
    double dec = 0.0;
    UnitVector pos;
    std::size_t index = 0;  ///< position of the object in the source sequence
};

struct NeighborHit {
    ObjId objid = 0;
    double distance = 0.0;  ///< chord-derived degrees
    std::size_t index = 0;  ///< position in the sequence the table was built from

    friend bool operator==(const NeighborHit&, const NeighborHit&) = default;
};

/// Work counters for cone searches.
struct QueryStats {
    std::uint64_t queries = 0;
    std::uint64_t zones_scanned = 0;
    std::uint64_t distance_tests = 0;

    QueryStats& operator+=(const QueryStats& o) {
        queries += o.queries;
        zones_scanned += o.zones_scanned;
        distance_tests += o.distance_tests;
        return *this;
    }
};

/// Objects bucketed into fixed-height declination zones, each zone sorted by
/// ra. Immutable after construction; safe for concurrent queries.
class ZoneTable {
public:
    explicit ZoneTable(ZoneConfig config = {}) : config_(config) {}
    ZoneTable(ZoneConfig config, std::vector<ZoneEntry> entries);

    const ZoneConfig& config() const { return config_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Lowest and highest zone that holds anything; meaningless when empty.
    int min_zone() const { return first_zone_; }
    int max_zone() const { return first_zone_ + static_cast<int>(offsets_.size()) - 2; }

    /// Entries of one zone, sorted by ra. Empty for zones without objects.
    std::span<const ZoneEntry> zone(int zone_id) const;

    std::span<const ZoneEntry> entries() const { return entries_; }

    /// Visits every object within r degrees of (ra, dec) as (entry, chord²).
    /// Zones are visited bottom to top, each in ra order.
    template <typename Visitor>
    void for_each_neighbor(double ra, double dec, double r, Visitor&& visit, QueryStats* stats = nullptr) const;

private:
    ZoneConfig config_;
    int first_zone_ = 0;
    std::vector<ZoneEntry> entries_;
    std::vector<std::size_t> offsets_;  // zone k spans [offsets_[k], offsets_[k+1])
};

/// Builds a table from anything with objid, ra and dec members.
template <typename T>
ZoneTable build_zone_table(std::span<const T> objects, const ZoneConfig& config = {}) {
    std::vector<ZoneEntry> entries;
    entries.reserve(objects.size());
    for (std::size_t k = 0; k < objects.size(); ++k) {
        const auto& o = objects[k];
        entries.push_back({zone_of(o.dec, config), o.objid, o.ra, o.dec, unit_vector(o.ra, o.dec), k});
    }
    return ZoneTable(config, std::move(entries));
}

template <typename T>
ZoneTable build_zone_table(const std::vector<T>& objects, const ZoneConfig& config = {}) {
    return build_zone_table(std::span<const T>(objects), config);
}

/// Half-width in ra (degrees) that the scan uses for one zone of a cone
/// query. Never smaller than the true ra extent of the cone within that zone.
double zone_ra_half_width(double dec, double r, int zone_id, int center_zone, const ZoneConfig& config);

/// Largest ra offset of any point of the cone, or 180 when it covers a pole.
/// Queries require [ra - w, ra + w] to stay inside [0, 360].
double cone_ra_half_width(double dec, double r);

/// Cone search: all objects within r degrees of (ra, dec), self included.
std::vector<NeighborHit> neighbors(const ZoneTable& table, double ra, double dec, double r,
                                   QueryStats* stats = nullptr);

template <typename Visitor>
void ZoneTable::for_each_neighbor(double ra, double dec, double r, Visitor&& visit, QueryStats* stats) const {
    if (stats) ++stats->queries;
    if (entries_.empty()) return;
    const UnitVector q = unit_vector(ra, dec);
    const double r2 = chord_cutoff(r);
    const double dec_lo = dec - r;
    const double dec_hi = dec + r;
    const int last_valid = static_cast<int>(std::floor(180.0 / config_.zone_height));
    const int center = zone_of(dec, config_);
    const int zmin = std::max({zone_of(dec_lo, config_), 0, min_zone()});
    const int zmax = std::min({zone_of(dec_hi, config_), last_valid, max_zone()});
    for (int zid = zmin; zid <= zmax; ++zid) {
        auto zone_entries = zone(zid);
        if (zone_entries.empty()) continue;
        if (stats) ++stats->zones_scanned;
        const double x = zone_ra_half_width(dec, r, zid, center, config_);
        const double ra_lo = ra - x;
        const double ra_hi = ra + x;
        auto it = std::lower_bound(zone_entries.begin(), zone_entries.end(), ra_lo,
                                   [](const ZoneEntry& e, double v) { return e.ra < v; });
        for (; it != zone_entries.end() && it->ra <= ra_hi; ++it) {
            if (it->dec < dec_lo || it->dec > dec_hi) continue;
            if (stats) ++stats->distance_tests;
            const double d2 = chord_squared(it->pos, q);
            if (r2 > d2) visit(*it, d2);
        }
    }
}

}  // namespace maxbcg

#endif  // MAXBCG_ZONE_INDEX_HPP
