#include "maxbcg/partition.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace maxbcg {

namespace {

Partition whole_run_slab(const RunGeometry& geometry) {
    Partition p;
    p.owned_target = {geometry.target.min_dec, geometry.target.max_dec, true};
    p.owned_candidate = {geometry.candidate_area.min_dec, geometry.candidate_area.max_dec, true};
    p.candidate_eval = p.owned_candidate;
    p.loaded_data = {geometry.data_area.min_dec, geometry.data_area.max_dec, true};
    return p;
}

std::size_t count_loaded(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const DecInterval& rows) {
    return static_cast<std::size_t>(std::count_if(galaxies.begin(), galaxies.end(), [&](const Galaxy& g) {
        return geometry.data_area.contains(g.ra, g.dec) && rows.contains(g.dec);
    }));
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

}  // namespace

RunGeometry RunGeometry::around(const RegionBounds& target, double buffer_width) {
    RunGeometry g;
    g.target = target;
    g.buffer_width = buffer_width;
    g.candidate_area = target.expanded(buffer_width);
    g.data_area = g.candidate_area.expanded(buffer_width);
    return g;
}

void RunGeometry::validate(const KCorrTable& kcorr) const {
    target.validate();
    if (!(buffer_width > 0.0)) throw ValidationError("buffer width must be positive");
    if (buffer_width < kcorr.max_radius()) {
        throw ValidationError("buffer width " + std::to_string(buffer_width) + " deg is below the largest kcorr radius " +
                              std::to_string(kcorr.max_radius()) + " deg");
    }
    try {
        data_area.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("data area (target plus two buffers): ") + e.what());
    }
}

PartitionPlan plan_partitions(std::span<const Galaxy> galaxies, const RunGeometry& geometry, int n,
                              const KCorrTable& kcorr, const ZoneConfig& zone) {
    geometry.validate(kcorr);
    zone.validate();
    if (n < 1) throw ValidationError("partition count must be at least 1");

    const auto& T = geometry.target;
    const auto& B = geometry.candidate_area;
    const auto& P = geometry.data_area;
    const double w = geometry.buffer_width;

    const int zlo = zone_of(T.min_dec, zone);
    const int zhi = zone_of(T.max_dec, zone);
    std::vector<std::size_t> counts(static_cast<std::size_t>(zhi - zlo) + 1, 0);
    std::size_t total = 0;
    for (const auto& g : galaxies) {
        if (!T.contains(g.ra, g.dec)) continue;
        ++counts[static_cast<std::size_t>(std::clamp(zone_of(g.dec, zone), zlo, zhi) - zlo)];
        ++total;
    }
    // nonempty_after[k]: nonempty zones strictly above zone zlo + k
    std::vector<int> nonempty_after(counts.size(), 0);
    int nonempty = 0;
    for (std::size_t k = counts.size(); k-- > 0;) {
        nonempty_after[k] = nonempty;
        if (counts[k] > 0) ++nonempty;
    }
    if (n > nonempty) {
        throw ValidationError(std::to_string(n) + " partitions requested but the target area has only " +
                              std::to_string(nonempty) + " nonempty zones");
    }

    // Greedy sweep: close a slab once it reaches its share of the running
    // total, or when the remaining nonempty zones are just enough to give
    // every later slab one.
    std::vector<double> cuts;
    std::size_t cum = 0;
    bool slab_nonempty = false;
    for (std::size_t k = 0; k < counts.size() && static_cast<int>(cuts.size()) < n - 1; ++k) {
        cum += counts[k];
        slab_nonempty = slab_nonempty || counts[k] > 0;
        const int needed = n - 1 - static_cast<int>(cuts.size());
        if (!slab_nonempty || nonempty_after[k] < needed) continue;
        const bool share_reached = cum * static_cast<std::size_t>(n) >= (cuts.size() + 1) * total;
        if (share_reached || nonempty_after[k] == needed) {
            cuts.push_back((zlo + static_cast<int>(k) + 1) * zone.zone_height - 90.0);
            slab_nonempty = false;
        }
    }

    PartitionPlan plan;
    plan.geometry = geometry;
    std::vector<double> edges{T.min_dec};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(T.max_dec);
    for (int k = 0; k < n; ++k) {
        const bool last = k == n - 1;
        Partition p;
        p.owned_target = {edges[k], edges[k + 1], last};
        p.owned_candidate = p.owned_target;
        if (k == 0) p.owned_candidate.lo = B.min_dec;
        if (last) p.owned_candidate.hi = B.max_dec;
        p.candidate_eval = {std::max(p.owned_target.lo - w, B.min_dec), std::min(p.owned_target.hi + w, B.max_dec),
                            true};
        p.loaded_data = {std::max(p.candidate_eval.lo - w, P.min_dec), std::min(p.candidate_eval.hi + w, P.max_dec),
                         true};
        p.estimated_load = count_loaded(galaxies, geometry, p.loaded_data);
        plan.parts.push_back(p);
    }
    return plan;
}

SlabOutput run_slab(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const Partition& slab,
                    const KCorrTable& kcorr, const RunOptions& options) {
    SlabOutput out;
    auto& m = out.metrics;
    Stopwatch clock;

    std::vector<Galaxy> data;
    for (const auto& g : galaxies) {
        if (geometry.data_area.contains(g.ra, g.dec) && slab.loaded_data.contains(g.dec)) data.push_back(g);
    }
    const ZoneTable zones = build_zone_table(data, options.zone);
    m.galaxies_loaded = data.size();
    m.zone_seconds = clock.lap();

    // Candidates over the whole evaluation band, including the overlap that
    // neighbouring slabs also compute; the cluster test needs them.
    std::vector<Candidate> evaluated;
    for (const auto& g : data) {
        if (!geometry.candidate_area.contains(g.ra, g.dec) || !slab.candidate_eval.contains(g.dec)) continue;
        ++m.galaxies_evaluated;
        if (auto c = bcg_candidate(g, zones, data, kcorr, options.params, &m.candidate_queries)) {
            evaluated.push_back(*c);
        }
    }
    m.candidates_found = evaluated.size();
    m.candidate_seconds = clock.lap();

    const ZoneTable candidate_zones = build_zone_table(evaluated, options.zone);
    for (const auto& c : evaluated) {
        if (!geometry.target.contains(c.ra, c.dec) || !slab.owned_target.contains(c.dec)) continue;
        ++m.cluster_tests;
        if (is_cluster(c, candidate_zones, evaluated, kcorr, options.params, &m.cluster_queries)) {
            out.clusters.push_back(c);
        }
    }
    m.clusters_found = out.clusters.size();
    m.cluster_seconds = clock.lap();

    for (const auto& cl : out.clusters) {
        auto members = cluster_members(cl, zones, data, kcorr, options.params, &m.member_queries);
        out.members.insert(out.members.end(), members.begin(), members.end());
    }
    m.members_found = out.members.size();
    m.member_seconds = clock.lap();

    for (const auto& c : evaluated) {
        if (slab.owned_candidate.contains(c.dec)) out.candidates.push_back(c);
    }
    return out;
}

void canonicalize(RunResult& result) {
    auto by_id = [](const Candidate& a, const Candidate& b) { return a.objid < b.objid; };
    auto same_id = [](const Candidate& a, const Candidate& b) { return a.objid == b.objid; };
    std::sort(result.candidates.begin(), result.candidates.end(), by_id);
    std::sort(result.clusters.begin(), result.clusters.end(), by_id);
    if (std::adjacent_find(result.candidates.begin(), result.candidates.end(), same_id) != result.candidates.end() ||
        std::adjacent_find(result.clusters.begin(), result.clusters.end(), same_id) != result.clusters.end()) {
        throw std::logic_error("an objid was reported by more than one partition");
    }
    std::sort(result.members.begin(), result.members.end(), [](const ClusterMember& a, const ClusterMember& b) {
        if (a.cluster_objid != b.cluster_objid) return a.cluster_objid < b.cluster_objid;
        return a.galaxy_objid < b.galaxy_objid;
    });
}

RunResult run_sequential(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                         const RunOptions& options) {
    Stopwatch wall;
    geometry.validate(kcorr);
    options.params.validate();
    SlabOutput slab = run_slab(galaxies, geometry, whole_run_slab(geometry), kcorr, options);
    RunResult result;
    result.candidates = std::move(slab.candidates);
    result.clusters = std::move(slab.clusters);
    result.members = std::move(slab.members);
    result.metrics.partitions.push_back(slab.metrics);
    canonicalize(result);
    result.metrics.wall_seconds = wall.seconds();
    return result;
}

RunResult run_partitioned(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                          int n, const RunOptions& options) {
    Stopwatch wall;
    options.params.validate();
    const PartitionPlan plan = plan_partitions(galaxies, geometry, n, kcorr, options.zone);

    std::vector<SlabOutput> outputs(plan.parts.size());
    std::vector<std::exception_ptr> errors(plan.parts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < plan.parts.size();) {
            try {
                outputs[k] = run_slab(galaxies, geometry, plan.parts[k], kcorr, options);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const unsigned workers = worker_count(options.threads, plan.parts.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Merge in partition order; canonical sorting makes the result
    // independent of completion order.
    RunResult result;
    for (auto& o : outputs) {
        result.candidates.insert(result.candidates.end(), o.candidates.begin(), o.candidates.end());
        result.clusters.insert(result.clusters.end(), o.clusters.begin(), o.clusters.end());
        result.members.insert(result.members.end(), o.members.begin(), o.members.end());
        result.metrics.partitions.push_back(o.metrics);
    }
    canonicalize(result);
    result.metrics.wall_seconds = wall.seconds();
    return result;
}

}  // namespace maxbcg
