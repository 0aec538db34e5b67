#ifndef MAXBCG_ORACLE_HPP
#define MAXBCG_ORACLE_HPP

#include <span>
#include <vector>

#include "maxbcg/catalog.hpp"
#include "maxbcg/partition.hpp"
#include "maxbcg/zone_index.hpp"

/// Index-free reference implementations used to validate the zone search
/// and the pipeline orchestration. Quadratic; meant for small catalogs.
namespace maxbcg::oracle {

/// Tests every object against the cone with the shared chord metric; hits
/// come back in input order with `index` pointing into `objects`.
template <typename T>
std::vector<NeighborHit> brute_neighbors(std::span<const T> objects, double ra, double dec, double r) {
    std::vector<NeighborHit> hits;
    const UnitVector q = unit_vector(ra, dec);
    const double r2 = chord_cutoff(r);
    for (std::size_t k = 0; k < objects.size(); ++k) {
        const double d2 = chord_squared(unit_vector(objects[k].ra, objects[k].dec), q);
        if (r2 > d2) hits.push_back({objects[k].objid, chord_degrees(d2), k});
    }
    return hits;
}

inline std::vector<NeighborHit> brute_neighbors(const std::vector<Galaxy>& galaxies, double ra, double dec,
                                                double r) {
    return brute_neighbors(std::span<const Galaxy>(galaxies), ra, dec, r);
}

/// Filter, count, pick-most-likely and membership steps written directly
/// against brute_neighbors. Same formulas and tolerances as the engine.
RunResult brute_pipeline(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                         const BCGParams& params = {});

}  // namespace maxbcg::oracle

#endif  // MAXBCG_ORACLE_HPP
