#ifndef MAXBCG_ORACLE_CHECK_HPP
#define MAXBCG_ORACLE_CHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maxbcg/zone_index.hpp"

namespace maxbcg {

struct TrialOutcome {
    bool ok = true;
    std::uint64_t seed = 0;
    std::size_t comparisons = 0;  ///< queries compared, or result rows compared
    std::string detail;           ///< first disagreement, when !ok
};

/// Cone radii the neighbor trials draw from, in degrees.
inline const std::vector<double> kTrialRadii{0.01, 0.05, 0.25, 0.5, 1.0};

/// One random catalog of at most 10^4 objects (uniform sky, dense patch or
/// near-pole band) and a batch of cone queries, compared hit-for-hit and
/// distance-for-distance with the brute-force search.
TrialOutcome neighbor_trial(std::uint64_t seed, const ZoneConfig& zone = {}, std::size_t max_objects = 10000,
                            int queries = 25);

/// One random catalog of at most `max_galaxies` galaxies with planted
/// clusters, run through the engine and the brute-force pipeline; outputs
/// must agree field for field.
TrialOutcome pipeline_trial(std::uint64_t seed, const ZoneConfig& zone = {}, std::size_t max_galaxies = 500);

}  // namespace maxbcg

#endif  // MAXBCG_ORACLE_CHECK_HPP
