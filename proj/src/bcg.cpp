#include "maxbcg/bcg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxbcg {

namespace {

inline double sq(double v) { return v * v; }

inline bool between(double v, double lo, double hi) { return v >= lo && v <= hi; }

struct Passing {
    RedshiftScore score;
    const KCorrEntry* k;
};

struct Friend {
    double distance;
    double i;
    double gr;
    double ri;
};

std::vector<Passing> passing_redshifts(const Galaxy& g, const KCorrTable& kcorr, const BCGParams& p) {
    std::vector<Passing> out;
    for (const auto& k : kcorr) {
        const double chisq = chi_square(g, k, p);
        if (chisq < p.chisq_threshold) out.push_back({{k.zid, k.z, chisq, 0}, &k});
    }
    return out;
}

SearchWindow window_over(std::span<const Passing> passing, double g_i, const BCGParams& p) {
    SearchWindow w;
    w.rad = -std::numeric_limits<double>::infinity();
    w.imin = g_i;
    w.imax = -std::numeric_limits<double>::infinity();
    double grlo = std::numeric_limits<double>::infinity(), grhi = -grlo;
    double rilo = grlo, rihi = -grlo;
    for (const auto& s : passing) {
        w.rad = std::max(w.rad, s.k->radius);
        w.imax = std::max(w.imax, s.k->ilim);
        grlo = std::min(grlo, s.k->gr);
        grhi = std::max(grhi, s.k->gr);
        rilo = std::min(rilo, s.k->ri);
        rihi = std::max(rihi, s.k->ri);
    }
    w.grmin = grlo - 2 * p.gr_pop_sigma;
    w.grmax = grhi + 2 * p.gr_pop_sigma;
    w.rimin = rilo - 2 * p.ri_pop_sigma;
    w.rimax = rihi + 2 * p.ri_pop_sigma;
    return w;
}

}  // namespace

double chi_square(const Galaxy& g, const KCorrEntry& k, const BCGParams& p) {
    return sq(g.i - k.i) / sq(p.mag_dispersion) + sq(g.gr - k.gr) / (sq(g.sigmagr) + sq(p.gr_pop_sigma)) +
           sq(g.ri - k.ri) / (sq(g.sigmari) + sq(p.ri_pop_sigma));
}

std::vector<RedshiftScore> filter_redshifts(const Galaxy& g, const KCorrTable& kcorr, const BCGParams& p) {
    std::vector<RedshiftScore> out;
    for (const auto& s : passing_redshifts(g, kcorr, p)) out.push_back(s.score);
    return out;
}

SearchWindow search_window(std::span<const RedshiftScore> scores, const KCorrTable& kcorr, double g_i,
                           const BCGParams& p) {
    if (scores.empty()) throw std::invalid_argument("search_window needs at least one passing redshift");
    std::vector<Passing> passing;
    for (const auto& s : scores) {
        const KCorrEntry* k = kcorr.find_by_zid(s.zid);
        if (k == nullptr) throw ValidationError("redshift score with unknown zid " + std::to_string(s.zid));
        passing.push_back({s, k});
    }
    return window_over(passing, g_i, p);
}

std::optional<Candidate> bcg_candidate(const Galaxy& g, const ZoneTable& zones, std::span<const Galaxy> galaxies,
                                       const KCorrTable& kcorr, const BCGParams& p, QueryStats* stats) {
    auto passing = passing_redshifts(g, kcorr, p);
    if (passing.empty()) return std::nullopt;
    const SearchWindow w = window_over(passing, g.i, p);

    std::vector<Friend> friends;
    zones.for_each_neighbor(
        g.ra, g.dec, w.rad,
        [&](const ZoneEntry& e, double d2) {
            if (e.objid == g.objid) return;
            const Galaxy& f = galaxies[e.index];
            if (between(f.i, w.imin, w.imax) && between(f.gr, w.grmin, w.grmax) && between(f.ri, w.rimin, w.rimax)) {
                friends.push_back({chord_degrees(d2), f.i, f.gr, f.ri});
            }
        },
        stats);

    for (auto& s : passing) {
        const KCorrEntry& k = *s.k;
        int count = 0;
        for (const auto& f : friends) {
            if (f.distance < k.radius && between(f.i, g.i, k.ilim) &&
                between(f.gr, k.gr - p.gr_pop_sigma, k.gr + p.gr_pop_sigma) &&
                between(f.ri, k.ri - p.ri_pop_sigma, k.ri + p.ri_pop_sigma)) {
                ++count;
            }
        }
        s.score.ngal = count;
    }

    // Natural log.
    std::optional<double> best;
    for (const auto& s : passing) {
        if (s.score.ngal <= 0) continue;
        const double like = std::log(static_cast<double>(s.score.ngal + 1)) - s.score.chisq;
        if (!best || like > *best) best = like;
    }
    if (!best) return std::nullopt;

    // Several redshifts may attain the maximum within tolerance; the lowest
    // zid wins so the result is deterministic.
    for (const auto& s : passing) {
        if (s.score.ngal <= 0) continue;
        const double like = std::log(static_cast<double>(s.score.ngal + 1)) - s.score.chisq;
        if (std::abs(like - *best) < p.chi_select_tol) {
            return Candidate{g.objid, g.ra, g.dec, s.score.z, g.i, s.score.ngal + 1, *best};
        }
    }
    return std::nullopt;  // unreachable: the maximum itself is within tolerance
}

const KCorrEntry& kcorr_at(const KCorrTable& kcorr, double z) {
    const KCorrEntry* k = kcorr.find_by_z(z, kRedshiftMatchTol);
    if (k == nullptr) throw ValidationError("candidate redshift " + std::to_string(z) + " not in kcorr table");
    return *k;
}

bool is_cluster(const Candidate& c, const ZoneTable& candidate_zones, std::span<const Candidate> candidates,
                const KCorrTable& kcorr, const BCGParams& p, QueryStats* stats) {
    const KCorrEntry& k = kcorr_at(kcorr, c.z);
    const double zlo = c.z - p.z_window;
    const double zhi = c.z + p.z_window;
    std::optional<double> best;
    candidate_zones.for_each_neighbor(
        c.ra, c.dec, k.radius,
        [&](const ZoneEntry& e, double) {
            const Candidate& other = candidates[e.index];
            if (between(other.z, zlo, zhi) && (!best || other.chi2 > *best)) best = other.chi2;
        },
        stats);
    return best && std::abs(*best - c.chi2) < p.chi_tie_tol;
}

std::vector<ClusterMember> cluster_members(const Cluster& cl, const ZoneTable& zones,
                                           std::span<const Galaxy> galaxies, const KCorrTable& kcorr,
                                           const BCGParams& p, QueryStats* stats) {
    const KCorrEntry& k = kcorr_at(kcorr, cl.z);
    const double rad = k.radius * r200(cl.ngal);
    std::vector<ClusterMember> out{{cl.objid, cl.objid, 0.0}};
    zones.for_each_neighbor(
        cl.ra, cl.dec, rad,
        [&](const ZoneEntry& e, double d2) {
            if (e.objid == cl.objid) return;
            const Galaxy& g = galaxies[e.index];
            const double distance = chord_degrees(d2);
            if (distance < rad && between(g.i, cl.i - p.member_mag_slack, k.ilim) &&
                between(g.gr, k.gr - p.gr_pop_sigma, k.gr + p.gr_pop_sigma) &&
                between(g.ri, k.ri - p.ri_pop_sigma, k.ri + p.ri_pop_sigma)) {
                out.push_back({cl.objid, e.objid, distance});
            }
        },
        stats);
    return out;
}

}  // namespace maxbcg
