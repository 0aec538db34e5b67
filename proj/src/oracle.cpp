#include "maxbcg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "maxbcg/bcg.hpp"

namespace maxbcg::oracle {

namespace {

bool in_closed(double v, double lo, double hi) { return lo <= v && v <= hi; }

const KCorrEntry* linear_lookup(const KCorrTable& kcorr, double z) {
    for (const auto& k : kcorr) {
        if (std::abs(k.z - z) < kRedshiftMatchTol) return &k;
    }
    return nullptr;
}

std::optional<Candidate> brute_candidate(const Galaxy& g, const std::vector<Galaxy>& data, const KCorrTable& kcorr,
                                         const BCGParams& p) {
    struct Row {
        const KCorrEntry* k;
        double chisq;
        int ngal;
    };
    std::vector<Row> rows;
    for (const auto& k : kcorr) {
        const double chisq = chi_square(g, k, p);
        if (chisq < p.chisq_threshold) rows.push_back({&k, chisq, 0});
    }
    if (rows.empty()) return std::nullopt;

    double rad = rows.front().k->radius, imax = rows.front().k->ilim;
    double grlo = rows.front().k->gr, grhi = grlo, rilo = rows.front().k->ri, rihi = rilo;
    for (const auto& row : rows) {
        rad = std::max(rad, row.k->radius);
        imax = std::max(imax, row.k->ilim);
        grlo = std::min(grlo, row.k->gr);
        grhi = std::max(grhi, row.k->gr);
        rilo = std::min(rilo, row.k->ri);
        rihi = std::max(rihi, row.k->ri);
    }
    const double grmin = grlo - 2 * p.gr_pop_sigma, grmax = grhi + 2 * p.gr_pop_sigma;
    const double rimin = rilo - 2 * p.ri_pop_sigma, rimax = rihi + 2 * p.ri_pop_sigma;

    std::vector<std::pair<double, const Galaxy*>> friends;
    for (const auto& hit : brute_neighbors(data, g.ra, g.dec, rad)) {
        const Galaxy& f = data[hit.index];
        if (hit.objid != g.objid && in_closed(f.i, g.i, imax) && in_closed(f.gr, grmin, grmax) &&
            in_closed(f.ri, rimin, rimax)) {
            friends.emplace_back(hit.distance, &f);
        }
    }
    for (auto& row : rows) {
        const KCorrEntry& k = *row.k;
        for (const auto& [distance, f] : friends) {
            if (distance < k.radius && in_closed(f->i, g.i, k.ilim) &&
                in_closed(f->gr, k.gr - p.gr_pop_sigma, k.gr + p.gr_pop_sigma) &&
                in_closed(f->ri, k.ri - p.ri_pop_sigma, k.ri + p.ri_pop_sigma)) {
                ++row.ngal;
            }
        }
    }

    std::optional<double> best;
    for (const auto& row : rows) {
        if (row.ngal > 0) {
            const double like = std::log(row.ngal + 1.0) - row.chisq;
            best = best ? std::max(*best, like) : like;
        }
    }
    if (!best) return std::nullopt;
    for (const auto& row : rows) {
        if (row.ngal > 0 && std::abs(std::log(row.ngal + 1.0) - row.chisq - *best) < p.chi_select_tol) {
            return Candidate{g.objid, g.ra, g.dec, row.k->z, g.i, row.ngal + 1, *best};
        }
    }
    return std::nullopt;
}

}  // namespace

RunResult brute_pipeline(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                         const BCGParams& params) {
    std::vector<Galaxy> data;
    for (const auto& g : galaxies) {
        if (geometry.data_area.contains(g.ra, g.dec)) data.push_back(g);
    }

    RunResult result;
    for (const auto& g : data) {
        if (!geometry.candidate_area.contains(g.ra, g.dec)) continue;
        if (auto c = brute_candidate(g, data, kcorr, params)) result.candidates.push_back(*c);
    }

    const std::span<const Candidate> candidates(result.candidates);
    for (const auto& c : result.candidates) {
        if (!geometry.target.contains(c.ra, c.dec)) continue;
        const KCorrEntry* k = linear_lookup(kcorr, c.z);
        if (k == nullptr) throw ValidationError("oracle: candidate redshift missing from kcorr");
        std::optional<double> best;
        for (const auto& hit : brute_neighbors(candidates, c.ra, c.dec, k->radius)) {
            const Candidate& other = candidates[hit.index];
            if (in_closed(other.z, c.z - params.z_window, c.z + params.z_window)) {
                best = best ? std::max(*best, other.chi2) : other.chi2;
            }
        }
        if (best && std::abs(*best - c.chi2) < params.chi_tie_tol) result.clusters.push_back(c);
    }

    for (const auto& cl : result.clusters) {
        const KCorrEntry* k = linear_lookup(kcorr, cl.z);
        const double rad = k->radius * r200(cl.ngal);
        result.members.push_back({cl.objid, cl.objid, 0.0});
        for (const auto& hit : brute_neighbors(data, cl.ra, cl.dec, rad)) {
            const Galaxy& g = data[hit.index];
            if (hit.objid != cl.objid && hit.distance < rad &&
                in_closed(g.i, cl.i - params.member_mag_slack, k->ilim) &&
                in_closed(g.gr, k->gr - params.gr_pop_sigma, k->gr + params.gr_pop_sigma) &&
                in_closed(g.ri, k->ri - params.ri_pop_sigma, k->ri + params.ri_pop_sigma)) {
                result.members.push_back({cl.objid, hit.objid, hit.distance});
            }
        }
    }
    canonicalize(result);
    return result;
}

}  // namespace maxbcg::oracle
