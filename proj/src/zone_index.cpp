#include "maxbcg/zone_index.hpp"

#include <algorithm>
#include <cmath>

namespace maxbcg {

namespace {

// Exact ra half-width of the cone restricted to declinations [lo, hi]. The
// widest point of a small circle sits at sin(d) = sin(dec) / cos(r); the
// half-width is unimodal in d, so the band maximum is at that point clamped
// into the band.
double band_half_width(double dec, double r, double lo, double hi) {
    if (std::abs(dec) + r >= 90.0) return 360.0;
    const double band_lo = std::max(lo, dec - r);
    const double band_hi = std::min(hi, dec + r);
    if (band_lo > band_hi) return 0.0;

    const double widest = std::asin(std::sin(dec * kDegToRad) / std::cos(r * kDegToRad)) / kDegToRad;
    const double d = std::clamp(widest, band_lo, band_hi);
    const double sr = std::sin(r / 2.0 * kDegToRad);
    const double sd = std::sin((d - dec) / 2.0 * kDegToRad);
    const double num = sr * sr - sd * sd;
    if (num <= 0.0) return 0.0;
    const double den = std::cos(dec * kDegToRad) * std::cos(d * kDegToRad);
    if (den <= 0.0) return 360.0;
    const double s = num / den;
    if (s >= 1.0) return 360.0;
    const double w = 2.0 * std::asin(std::sqrt(s)) / kDegToRad;
    return w * (1.0 + 1e-9) + 1e-8;
}

}  // namespace

void ZoneConfig::validate() const {
    if (!(zone_height > 0.0)) throw ValidationError("zone height must be positive");
    if (!(epsilon > 0.0)) throw ValidationError("zone epsilon must be positive");
}

ZoneTable::ZoneTable(ZoneConfig config, std::vector<ZoneEntry> entries)
    : config_(config), entries_(std::move(entries)) {
    config_.validate();
    std::sort(entries_.begin(), entries_.end(), [](const ZoneEntry& a, const ZoneEntry& b) {
        if (a.zone_id != b.zone_id) return a.zone_id < b.zone_id;
        if (a.ra != b.ra) return a.ra < b.ra;
        return a.objid < b.objid;
    });
    if (entries_.empty()) return;
    first_zone_ = entries_.front().zone_id;
    const int last_zone = entries_.back().zone_id;
    offsets_.assign(static_cast<std::size_t>(last_zone - first_zone_) + 2, 0);
    for (const auto& e : entries_) ++offsets_[static_cast<std::size_t>(e.zone_id - first_zone_) + 1];
    for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
}

std::span<const ZoneEntry> ZoneTable::zone(int zone_id) const {
    if (entries_.empty() || zone_id < first_zone_ || zone_id > max_zone()) return {};
    const auto k = static_cast<std::size_t>(zone_id - first_zone_);
    return std::span<const ZoneEntry>(entries_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

double zone_ra_half_width(double dec, double r, int zone_id, int center_zone, const ZoneConfig& config) {
    const double h = config.zone_height;
    double x;
    if (zone_id == center_zone) {
        x = r / std::cos(std::abs(dec) * kDegToRad) + config.epsilon;
    } else {
        // Zones below the center take their top edge, zones above their
        // bottom edge: the edge nearest the query point.
        const int edge_zone = zone_id < center_zone ? zone_id + 1 : zone_id;
        const double dec_at_zone = edge_zone * h - 90.0;
        const double delta_dec = std::abs(dec - dec_at_zone);
        x = std::sqrt(std::abs(r * r - delta_dec * delta_dec)) /
            (std::cos(std::abs(dec_at_zone) * kDegToRad) + config.epsilon);
    }
    // The planar narrowing above undershoots the spherical extent close to
    // the poles; never scan less than the exact width.
    const double lo = zone_id * h - 90.0;
    x = std::max(x, band_half_width(dec, r, lo, lo + h));
    return x * config.ra_window_scale;
}

double cone_ra_half_width(double dec, double r) { return band_half_width(dec, r, -90.0, 90.0); }

std::vector<NeighborHit> neighbors(const ZoneTable& table, double ra, double dec, double r, QueryStats* stats) {
    std::vector<NeighborHit> hits;
    table.for_each_neighbor(
        ra, dec, r, [&](const ZoneEntry& e, double d2) { hits.push_back({e.objid, chord_degrees(d2), e.index}); },
        stats);
    return hits;
}

}  // namespace maxbcg
