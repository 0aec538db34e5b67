#ifndef MAXBCG_BCG_HPP
#define MAXBCG_BCG_HPP

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "maxbcg/catalog.hpp"
#include "maxbcg/zone_index.hpp"

namespace maxbcg {

/// A galaxy that is the most likely BCG at some redshift with at least one
/// neighbor. chi2 holds the weighted likelihood ln(neighbors + 1) - chisq;
/// larger is better.
struct Candidate {
    ObjId objid = 0;
    double ra = 0.0;
    double dec = 0.0;
    double z = 0.0;
    double i = 0.0;
    int ngal = 0;  ///< neighbors + 1
    double chi2 = 0.0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

using Cluster = Candidate;

struct ClusterMember {
    ObjId cluster_objid = 0;
    ObjId galaxy_objid = 0;
    double distance = 0.0;

    friend bool operator==(const ClusterMember&, const ClusterMember&) = default;
};

struct RedshiftScore {
    int zid = 0;
    double z = 0.0;
    double chisq = 0.0;
    int ngal = 0;
};

/// Magnitude/color box and radius that bound every per-redshift count.
struct SearchWindow {
    double rad = 0.0;
    double imin = 0.0;
    double imax = 0.0;
    double grmin = 0.0;
    double grmax = 0.0;
    double rimin = 0.0;
    double rimax = 0.0;
};

/// Tolerance for locating a candidate's redshift in the k-table.
inline constexpr double kRedshiftMatchTol = 1e-7;

double chi_square(const Galaxy& g, const KCorrEntry& k, const BCGParams& p);

/// Redshifts at which g is a plausible BCG (chi_square strictly below the
/// threshold), in table order.
std::vector<RedshiftScore> filter_redshifts(const Galaxy& g, const KCorrTable& kcorr, const BCGParams& p);

/// Requires non-empty scores whose zids exist in kcorr.
SearchWindow search_window(std::span<const RedshiftScore> scores, const KCorrTable& kcorr, double g_i,
                           const BCGParams& p);

/// Weighted-likelihood evaluation of one galaxy. `zones` must be built over
/// `galaxies` (hits index into it).
std::optional<Candidate> bcg_candidate(const Galaxy& g, const ZoneTable& zones, std::span<const Galaxy> galaxies,
                                       const KCorrTable& kcorr, const BCGParams& p, QueryStats* stats = nullptr);

/// R200 radius in Mpc for a cluster of ngal galaxies.
inline double r200(double ngal) { return 0.17 * std::pow(ngal, 0.51); }

/// True when c has the best likelihood among candidates within 1 Mpc at its
/// redshift and within the redshift window. `candidate_zones` must be built
/// over `candidates`. Throws ValidationError when c.z is not in the table.
bool is_cluster(const Candidate& c, const ZoneTable& candidate_zones, std::span<const Candidate> candidates,
                const KCorrTable& kcorr, const BCGParams& p, QueryStats* stats = nullptr);

/// Galaxies inside the R200-scaled radius that match the template at the
/// cluster redshift. The BCG comes first at distance 0; the rest follow in
/// scan order.
std::vector<ClusterMember> cluster_members(const Cluster& cl, const ZoneTable& zones,
                                           std::span<const Galaxy> galaxies, const KCorrTable& kcorr,
                                           const BCGParams& p, QueryStats* stats = nullptr);

/// Entry for a stored candidate redshift; throws when none matches.
const KCorrEntry& kcorr_at(const KCorrTable& kcorr, double z);

}  // namespace maxbcg

#endif  // MAXBCG_BCG_HPP
