#ifndef MAXBCG_SYNTHETIC_HPP
#define MAXBCG_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "maxbcg/catalog.hpp"

namespace maxbcg {

/// Angular size of 1 Mpc is radius(z) = min(cap, kAngularScale / z) degrees;
/// the constant puts 1 Mpc at 0.74/1.78 deg when z = 0.05.
inline constexpr double kAngularScale = 0.05 * 0.74 / 1.78;
inline constexpr double kRedshiftStep = 0.001;

/// Smooth, monotone stand-in for a k-correction table with `steps` rows at
/// z = 0.001, 0.002, ...
KCorrTable generate_synthetic_kcorr(int steps = 1000, double radius_cap = 0.5);

struct PlantedCluster {
    double ra = 0.0;
    double dec = 0.0;
    double z = 0.0;
    int members = 0;
};

/// What was planted, for recovery checks.
struct PlantedRecord {
    ObjId bcg = 0;
    int zid = 0;
    std::vector<ObjId> members;
};

struct SyntheticCatalog {
    std::vector<Galaxy> galaxies;  // ascending objid
    std::vector<PlantedRecord> planted;
};

/// Field galaxies uniform over `region` (uniform in ra and sin(dec)) plus
/// one exact-template BCG and `members` fainter, color-matched companions
/// per requested cluster. Deterministic for a fixed seed.
SyntheticCatalog generate_synthetic_catalog(const RegionBounds& region, std::size_t n_field,
                                            const std::vector<PlantedCluster>& clusters, const KCorrTable& kcorr,
                                            std::uint64_t seed, const BCGParams& params = {});

/// Picks `count` cluster centers inside `region`, pairwise farther apart than
/// `min_separation` degrees, with redshifts drawn from [z_lo, z_hi].
std::vector<PlantedCluster> place_isolated_clusters(const RegionBounds& region, int count, int members,
                                                    double min_separation, double z_lo, double z_hi,
                                                    std::uint64_t seed);

/// First objid handed out by the generator.
inline constexpr ObjId kSyntheticIdBase = 1237650000000000000LL;

}  // namespace maxbcg

#endif  // MAXBCG_SYNTHETIC_HPP
