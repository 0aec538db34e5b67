#include "maxbcg/oracle_check.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "maxbcg/oracle.hpp"
#include "maxbcg/partition.hpp"
#include "maxbcg/synthetic.hpp"

namespace maxbcg {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double dec_uniform_on_sphere(std::mt19937_64& rng, double lo, double hi) {
    const double s = uniform(rng, std::sin(lo * kDegToRad), std::sin(hi * kDegToRad));
    return std::clamp(std::asin(s) / kDegToRad, lo, hi);
}

std::vector<Galaxy> random_sky(std::mt19937_64& rng, std::size_t n, int mode) {
    std::vector<Galaxy> out(n);
    double ra0 = uniform(rng, 20.0, 340.0), dec0 = uniform(rng, -80.0, 80.0);
    const bool north = uniform(rng, 0.0, 1.0) < 0.5;
    for (std::size_t k = 0; k < n; ++k) {
        Galaxy& g = out[k];
        g.objid = static_cast<ObjId>(k + 1);
        switch (mode) {
            case 0:  // whole sky minus the polar caps and the ra seam
                g.ra = uniform(rng, 5.0, 355.0);
                g.dec = dec_uniform_on_sphere(rng, -85.0, 85.0);
                break;
            case 1: {  // dense patch, many hits per cone
                g.dec = std::clamp(dec0 + uniform(rng, -3.0, 3.0), -85.0, 85.0);
                const double half = std::min(15.0, 3.0 / std::cos(dec0 * kDegToRad));
                g.ra = std::clamp(ra0 + uniform(rng, -half, half), 5.0, 355.0);
                break;
            }
            default:  // high declination band, where ra windows are widest
                g.ra = uniform(rng, 5.0, 355.0);
                g.dec = north ? uniform(rng, 75.0, 85.0) : uniform(rng, -85.0, -75.0);
                break;
        }
    }
    return out;
}

template <typename Row>
std::string describe_mismatch(const char* what, std::size_t idx, const std::vector<Row>& a,
                              const std::vector<Row>& b) {
    std::ostringstream s;
    s << what << ": engine has " << a.size() << " rows, oracle " << b.size() << "; first difference at row " << idx;
    return s.str();
}

template <typename Row>
bool same_rows(const char* what, const std::vector<Row>& a, const std::vector<Row>& b, std::string& detail) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (!(a[k] == b[k])) {
            detail = describe_mismatch(what, k, a, b);
            return false;
        }
    }
    if (a.size() != b.size()) {
        detail = describe_mismatch(what, n, a, b);
        return false;
    }
    return true;
}

}  // namespace

TrialOutcome neighbor_trial(std::uint64_t seed, const ZoneConfig& zone, std::size_t max_objects, int queries) {
    TrialOutcome outcome;
    outcome.seed = seed;
    std::mt19937_64 rng(seed);
    const std::size_t n = pick(rng, 1, std::max<std::size_t>(1, max_objects));
    const int mode = static_cast<int>(pick(rng, 0, 2));
    const std::vector<Galaxy> objects = random_sky(rng, n, mode);
    const ZoneTable table = build_zone_table(objects, zone);

    for (int q = 0; q < queries; ++q) {
        const double r = kTrialRadii[pick(rng, 0, kTrialRadii.size() - 1)];
        double ra = 0.0, dec = 0.0;
        bool valid = false;
        for (int attempt = 0; attempt < 50 && !valid; ++attempt) {
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                const Galaxy& g = objects[pick(rng, 0, objects.size() - 1)];
                ra = g.ra;
                dec = g.dec;
            } else {
                const Galaxy& a = objects[pick(rng, 0, objects.size() - 1)];
                ra = std::clamp(a.ra + uniform(rng, -r, r), 0.0, 359.999);
                dec = std::clamp(a.dec + uniform(rng, -r, r), -89.0, 89.0);
            }
            // The zone scan does not wrap in ra; keep to queries it supports.
            const double w = cone_ra_half_width(dec, r);
            valid = ra - w >= 0.0 && ra + w <= 360.0;
        }
        if (!valid) continue;

        auto fast = neighbors(table, ra, dec, r);
        auto slow = oracle::brute_neighbors(objects, ra, dec, r);
        auto by_id = [](const NeighborHit& a, const NeighborHit& b) { return a.objid < b.objid; };
        std::sort(fast.begin(), fast.end(), by_id);
        std::sort(slow.begin(), slow.end(), by_id);
        ++outcome.comparisons;

        bool same = fast.size() == slow.size();
        for (std::size_t k = 0; same && k < fast.size(); ++k) {
            same = fast[k].objid == slow[k].objid &&
                   std::bit_cast<std::uint64_t>(fast[k].distance) == std::bit_cast<std::uint64_t>(slow[k].distance);
        }
        if (!same) {
            std::ostringstream s;
            s.precision(17);
            s << "cone (" << ra << ", " << dec << ", r=" << r << ") over " << n << " objects: zone search returned "
              << fast.size() << " hits, brute force " << slow.size();
            outcome.ok = false;
            outcome.detail = s.str();
            return outcome;
        }
    }
    return outcome;
}

TrialOutcome pipeline_trial(std::uint64_t seed, const ZoneConfig& zone, std::size_t max_galaxies) {
    TrialOutcome outcome;
    outcome.seed = seed;
    std::mt19937_64 rng(seed);

    const double cap = std::vector<double>{0.1, 0.2, 0.3}[pick(rng, 0, 2)];
    const double buffer = cap * uniform(rng, 1.0, 1.5);
    const KCorrTable kcorr = generate_synthetic_kcorr(1000, cap);
    const double ra0 = uniform(rng, 10.0, 300.0), dec0 = uniform(rng, -60.0, 60.0);
    const RegionBounds target{ra0, ra0 + uniform(rng, 0.3, 1.0), dec0, dec0 + uniform(rng, 0.3, 1.0)};
    const RunGeometry geometry = RunGeometry::around(target, buffer);
    const RegionBounds& area = geometry.data_area;

    const std::size_t total = pick(rng, 20, std::max<std::size_t>(20, max_galaxies));
    std::vector<PlantedCluster> planted;
    std::size_t used = 0;
    const int n_clusters = static_cast<int>(pick(rng, 1, 4));
    for (int c = 0; c < n_clusters; ++c) {
        PlantedCluster pc;
        pc.ra = uniform(rng, target.min_ra, target.max_ra);
        pc.dec = uniform(rng, target.min_dec, target.max_dec);
        pc.z = uniform(rng, 0.05, 0.3);
        pc.members = static_cast<int>(pick(rng, 1, 12));
        if (used + static_cast<std::size_t>(pc.members) + 1 > total / 2) break;
        used += static_cast<std::size_t>(pc.members) + 1;
        planted.push_back(pc);
    }
    const std::size_t n_field = (total - used) / 2;
    auto catalog = generate_synthetic_catalog(area, n_field, planted, kcorr, rng());
    std::vector<Galaxy> galaxies = std::move(catalog.galaxies);

    // Template-like interlopers so that many galaxies pass the filter and
    // compete in the cluster test.
    ObjId next_id = galaxies.empty() ? 1 : galaxies.back().objid + 1;
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (galaxies.size() < total) {
        const KCorrEntry& k = kcorr[pick(rng, 30, 400)];
        Galaxy g;
        g.objid = next_id++;
        g.ra = uniform(rng, area.min_ra, area.max_ra);
        g.dec = uniform(rng, area.min_dec, area.max_dec);
        g.i = k.i + 0.6 * gauss(rng);
        g.gr = k.gr + 0.06 * gauss(rng);
        g.ri = k.ri + 0.07 * gauss(rng);
        g.sigmagr = sigma_gr(g.i);
        g.sigmari = sigma_ri(g.i);
        galaxies.push_back(g);
    }

    RunOptions options;
    options.zone = zone;
    options.threads = 1;
    const RunResult engine = run_sequential(galaxies, geometry, kcorr, options);
    const RunResult reference = oracle::brute_pipeline(galaxies, geometry, kcorr, options.params);
    outcome.comparisons = reference.candidates.size() + reference.clusters.size() + reference.members.size();

    std::string detail;
    if (!same_rows("candidates", engine.candidates, reference.candidates, detail) ||
        !same_rows("clusters", engine.clusters, reference.clusters, detail) ||
        !same_rows("members", engine.members, reference.members, detail)) {
        outcome.ok = false;
        outcome.detail = "catalog of " + std::to_string(galaxies.size()) + " galaxies: " + detail;
    }
    return outcome;
}

}  // namespace maxbcg
