#include "maxbcg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "maxbcg/bcg.hpp"
#include "maxbcg/zone_index.hpp"

namespace maxbcg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Template curves. Only monotonicity and ilim > i matter to the engine.
double bcg_imag(double z) { return 16.0 + 5.0 * std::log10(z / 0.1); }
double bcg_gr(double z) { return 0.7 + 2.0 * z; }
double bcg_ri(double z) { return 0.3 + 1.0 * z; }

// Point at angular distance `dist` (deg) and bearing `bearing` (rad) from (ra, dec).
std::pair<double, double> offset_position(double ra, double dec, double dist, double bearing) {
    const double d = dist * kDeg;
    const double dec0 = dec * kDeg;
    const double dec1 = std::asin(std::sin(dec0) * std::cos(d) + std::cos(dec0) * std::sin(d) * std::cos(bearing));
    const double dra = std::atan2(std::sin(bearing) * std::sin(d) * std::cos(dec0),
                                  std::cos(d) - std::sin(dec0) * std::sin(dec1));
    double ra1 = ra + dra / kDeg;
    if (ra1 < 0.0) ra1 += 360.0;
    if (ra1 >= 360.0) ra1 -= 360.0;
    return {ra1, dec1 / kDeg};
}

double angular_separation(double ra1, double dec1, double ra2, double dec2) {
    const double sd = std::sin((dec2 - dec1) * kDeg / 2.0);
    const double sr = std::sin((ra2 - ra1) * kDeg / 2.0);
    const double h = sd * sd + std::cos(dec1 * kDeg) * std::cos(dec2 * kDeg) * sr * sr;
    return 2.0 * std::asin(std::sqrt(std::min(1.0, h))) / kDeg;
}

}  // namespace

KCorrTable generate_synthetic_kcorr(int steps, double radius_cap) {
    if (steps < 2) throw ValidationError("synthetic kcorr needs at least 2 steps");
    if (!(radius_cap > 0.0)) throw ValidationError("radius cap must be positive");
    std::vector<KCorrEntry> entries;
    entries.reserve(static_cast<std::size_t>(steps));
    for (int k = 1; k <= steps; ++k) {
        KCorrEntry e;
        e.zid = k;
        e.z = k * kRedshiftStep;
        e.i = bcg_imag(e.z);
        e.ilim = e.i + 2.5;
        e.gr = bcg_gr(e.z);
        e.ri = bcg_ri(e.z);
        e.ug = 1.5 + e.z;
        e.iz = 0.2 + 0.4 * e.z;
        e.radius = std::min(radius_cap, kAngularScale / e.z);
        entries.push_back(e);
    }
    return KCorrTable(std::move(entries));
}

SyntheticCatalog generate_synthetic_catalog(const RegionBounds& region, std::size_t n_field,
                                            const std::vector<PlantedCluster>& clusters, const KCorrTable& kcorr,
                                            std::uint64_t seed, const BCGParams& params) {
    region.validate();
    for (const auto& c : clusters) {
        if (!region.contains(c.ra, c.dec)) {
            throw ValidationError("planted cluster center (" + std::to_string(c.ra) + ", " + std::to_string(c.dec) +
                                  ") outside generation region");
        }
        if (c.members < 0) throw ValidationError("planted cluster member count must be non-negative");
    }
    if (!clusters.empty() && kcorr.empty()) throw ValidationError("planting clusters needs a kcorr table");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SyntheticCatalog out;
    ObjId next_id = kSyntheticIdBase;

    const double sin_lo = std::sin(region.min_dec * kDeg);
    const double sin_hi = std::sin(region.max_dec * kDeg);
    for (std::size_t n = 0; n < n_field; ++n) {
        RawGalaxy raw;
        raw.objid = next_id++;
        raw.ra = region.min_ra + (region.max_ra - region.min_ra) * unit(rng);
        raw.dec = std::clamp(std::asin(sin_lo + (sin_hi - sin_lo) * unit(rng)) / kDeg, region.min_dec,
                             region.max_dec);
        raw.i = 14.0 + 7.5 * unit(rng);
        raw.r = raw.i + 1.2 * unit(rng);
        raw.g = raw.r + 0.3 + 1.9 * unit(rng);
        out.galaxies.push_back(derive_galaxy(raw));
    }

    for (const auto& c : clusters) {
        const KCorrEntry* k = &*std::min_element(kcorr.begin(), kcorr.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.z - c.z) < std::abs(b.z - c.z);
        });

        PlantedRecord record;
        record.zid = k->zid;
        Galaxy bcg;
        bcg.objid = record.bcg = next_id++;
        bcg.ra = c.ra;
        bcg.dec = c.dec;
        bcg.i = k->i;
        bcg.gr = k->gr;
        bcg.ri = k->ri;
        bcg.sigmagr = sigma_gr(bcg.i);
        bcg.sigmari = sigma_ri(bcg.i);
        out.galaxies.push_back(bcg);

        // Members sit well inside both the counting radius and the R200
        // membership radius, fainter than the BCG and inside the color windows.
        const double spread = 0.9 * k->radius * std::min(0.5, r200(c.members + 1.0));
        for (int m = 0; m < c.members; ++m) {
            const double dist = spread * std::sqrt(unit(rng));
            const double bearing = 2.0 * std::numbers::pi * unit(rng);
            auto [ra, dec] = offset_position(c.ra, c.dec, dist, bearing);
            Galaxy g;
            g.objid = next_id++;
            g.ra = ra;
            g.dec = dec;
            g.i = std::min(k->ilim, bcg.i + 0.05 + 0.95 * unit(rng));
            g.gr = k->gr + (unit(rng) - 0.5) * params.gr_pop_sigma;
            g.ri = k->ri + (unit(rng) - 0.5) * params.ri_pop_sigma;
            g.sigmagr = sigma_gr(g.i);
            g.sigmari = sigma_ri(g.i);
            record.members.push_back(g.objid);
            out.galaxies.push_back(g);
        }
        out.planted.push_back(std::move(record));
    }
    return out;
}

std::vector<PlantedCluster> place_isolated_clusters(const RegionBounds& region, int count, int members,
                                                    double min_separation, double z_lo, double z_hi,
                                                    std::uint64_t seed) {
    region.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PlantedCluster> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100000) {
            throw ValidationError("cannot place " + std::to_string(count) + " clusters " +
                                  std::to_string(min_separation) + " deg apart in the region");
        }
        PlantedCluster c;
        c.ra = region.min_ra + (region.max_ra - region.min_ra) * unit(rng);
        c.dec = region.min_dec + (region.max_dec - region.min_dec) * unit(rng);
        c.z = z_lo + (z_hi - z_lo) * unit(rng);
        c.members = members;
        bool isolated = std::all_of(out.begin(), out.end(), [&](const PlantedCluster& o) {
            return angular_separation(c.ra, c.dec, o.ra, o.dec) > min_separation;
        });
        if (isolated) out.push_back(c);
    }
    return out;
}

}  // namespace maxbcg
