#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "maxbcg/partition.hpp"
#include "maxbcg/results_io.hpp"
#include "maxbcg/synthetic.hpp"

using namespace maxbcg;

namespace {

struct Fixture {
    KCorrTable kcorr = generate_synthetic_kcorr(1000, 0.5);
    RunGeometry geometry = RunGeometry::around({40, 43, -1.5, 1.5}, 0.5);
    SyntheticCatalog catalog;

    explicit Fixture(std::size_t n_field = 10000, std::uint64_t seed = 17) {
        auto planted = place_isolated_clusters(geometry.target, 6, 10, 0.9, 0.06, 0.3, seed + 1);
        catalog = generate_synthetic_catalog(geometry.data_area, n_field, planted, kcorr, seed);
    }
};

std::string csv_of(const RunResult& r) {
    std::ostringstream s;
    write_candidates(s, r.candidates);
    write_candidates(s, r.clusters);
    write_members(s, r.members);
    return s.str();
}

bool on_zone_boundary(double dec, const ZoneConfig& zone) {
    const double k = (dec + 90.0) / zone.zone_height;
    return std::abs(k - std::round(k)) < 1e-6;
}

RunOptions one_thread() {
    RunOptions o;
    o.threads = 1;
    return o;
}

}  // namespace

TEST_CASE("geometry") {
    const RunGeometry g = RunGeometry::around({194, 196, 1.5, 3.5}, 0.5);
    CHECK(g.candidate_area == RegionBounds{193.5, 196.5, 1.0, 4.0});
    CHECK(g.data_area == RegionBounds{193, 197, 0.5, 4.5});
    const KCorrTable k = generate_synthetic_kcorr(1000, 0.5);
    CHECK_NOTHROW(g.validate(k));
    CHECK_THROWS_AS(RunGeometry::around({194, 196, 1.5, 3.5}, 0.4).validate(k), ValidationError);
    CHECK_THROWS_AS(RunGeometry::around({0.5, 2, 1.5, 3.5}, 0.5).validate(k), ValidationError);
    CHECK_THROWS_AS(RunGeometry::around({10, 12, 88, 89.5}, 0.5).validate(k), ValidationError);
}

TEST_CASE("plan_partitions") {
    const Fixture f;
    const ZoneConfig zone;

    SUBCASE("n = 1 is the whole run") {
        const auto plan = plan_partitions(f.catalog.galaxies, f.geometry, 1, f.kcorr);
        REQUIRE(plan.parts.size() == 1);
        const Partition& p = plan.parts[0];
        CHECK(p.owned_target.lo == f.geometry.target.min_dec);
        CHECK(p.owned_target.hi == f.geometry.target.max_dec);
        CHECK(p.owned_candidate.lo == f.geometry.candidate_area.min_dec);
        CHECK(p.owned_candidate.hi == f.geometry.candidate_area.max_dec);
        CHECK(p.loaded_data.lo == f.geometry.data_area.min_dec);
        CHECK(p.loaded_data.hi == f.geometry.data_area.max_dec);
    }

    SUBCASE("slabs tile T and B") {
        for (int n = 2; n <= 8; ++n) {
            const auto plan = plan_partitions(f.catalog.galaxies, f.geometry, n, f.kcorr);
            REQUIRE(plan.parts.size() == static_cast<std::size_t>(n));
            CHECK(plan.parts.front().owned_target.lo == f.geometry.target.min_dec);
            CHECK(plan.parts.back().owned_target.hi == f.geometry.target.max_dec);
            CHECK(plan.parts.front().owned_candidate.lo == f.geometry.candidate_area.min_dec);
            CHECK(plan.parts.back().owned_candidate.hi == f.geometry.candidate_area.max_dec);
            CHECK(plan.parts.back().owned_target.closed_top);
            for (int k = 0; k + 1 < n; ++k) {
                const auto& a = plan.parts[k];
                const auto& b = plan.parts[k + 1];
                CHECK(a.owned_target.hi == b.owned_target.lo);
                CHECK_FALSE(a.owned_target.closed_top);
                CHECK(a.owned_candidate.hi == b.owned_candidate.lo);
                CHECK(on_zone_boundary(a.owned_target.hi, zone));
                CHECK(a.owned_target.lo < a.owned_target.hi);
                CHECK(a.loaded_data.hi > b.loaded_data.lo);  // buffers duplicated
            }
        }
    }

    SUBCASE("uniform catalog balances within 25%") {
        const auto plan = plan_partitions(f.catalog.galaxies, f.geometry, 3, f.kcorr);
        double mean = 0;
        for (const auto& p : plan.parts) mean += static_cast<double>(p.estimated_load);
        mean /= 3.0;
        for (const auto& p : plan.parts) CHECK(std::abs(p.estimated_load - mean) <= 0.25 * mean);
    }

    SUBCASE("more slabs than nonempty zones") {
        const std::vector<Galaxy> two{{1, 41, 0.0, 17, 1, 0.5, 0.01, 0.01}, {2, 41, 0.5, 17, 1, 0.5, 0.01, 0.01}};
        CHECK(plan_partitions(two, f.geometry, 2, f.kcorr).parts.size() == 2);
        CHECK_THROWS_AS(plan_partitions(two, f.geometry, 3, f.kcorr), ValidationError);
        CHECK_THROWS_AS(plan_partitions(two, f.geometry, 0, f.kcorr), ValidationError);
    }
}

TEST_CASE("run_sequential") {
    const KCorrTable kcorr = generate_synthetic_kcorr(1000, 0.5);
    const RunGeometry geometry = RunGeometry::around({60, 62, 10, 12}, 0.5);

    SUBCASE("empty catalog") {
        const RunResult r = run_sequential({}, geometry, kcorr);
        CHECK(r.candidates.empty());
        CHECK(r.clusters.empty());
        CHECK(r.members.empty());
    }
    SUBCASE("one planted cluster inside T") {
        const auto cat = generate_synthetic_catalog(geometry.data_area, 0, {{61, 11, 0.12, 3}}, kcorr, 4);
        const RunResult r = run_sequential(cat.galaxies, geometry, kcorr);
        REQUIRE(r.clusters.size() == 1);
        CHECK(r.clusters[0].objid == cat.planted[0].bcg);
        CHECK(r.members.size() == 4);
    }
    SUBCASE("planted cluster in B outside T") {
        const auto cat = generate_synthetic_catalog(geometry.data_area, 0, {{62.3, 11, 0.12, 3}}, kcorr, 4);
        const RunResult r = run_sequential(cat.galaxies, geometry, kcorr);
        std::set<ObjId> cand;
        for (const auto& c : r.candidates) cand.insert(c.objid);
        CHECK(cand.count(cat.planted[0].bcg) == 1);
        CHECK(r.clusters.empty());
        CHECK(r.members.empty());
    }
    SUBCASE("clusters are candidates and members belong to clusters") {
        const Fixture f(4000, 3);
        const RunResult r = run_sequential(f.catalog.galaxies, f.geometry, f.kcorr);
        std::set<ObjId> cand, clus;
        for (const auto& c : r.candidates) cand.insert(c.objid);
        for (const auto& c : r.clusters) {
            CHECK(cand.count(c.objid) == 1);
            CHECK(f.geometry.target.contains(c.ra, c.dec));
            clus.insert(c.objid);
        }
        for (const auto& m : r.members) CHECK(clus.count(m.cluster_objid) == 1);
        for (const auto& c : r.candidates) CHECK(f.geometry.candidate_area.contains(c.ra, c.dec));
    }
}

TEST_CASE("partitioned runs equal the sequential run") {
    const Fixture f;
    const RunResult seq = run_sequential(f.catalog.galaxies, f.geometry, f.kcorr);
    REQUIRE(seq.clusters.size() >= 5);
    const std::string expected = csv_of(seq);
    for (int n = 1; n <= 8; ++n) {
        CAPTURE(n);
        const RunResult par = run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, n);
        CHECK(par.candidates == seq.candidates);
        CHECK(par.clusters == seq.clusters);
        CHECK(par.members == seq.members);
        CHECK(csv_of(par) == expected);
    }
}

TEST_CASE("partition equality across seeds") {
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
        const Fixture f(3000, seed);
        const RunResult seq = run_sequential(f.catalog.galaxies, f.geometry, f.kcorr);
        for (int n : {2, 5, 7}) {
            const RunResult par = run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, n, one_thread());
            CHECK(csv_of(par) == csv_of(seq));
        }
    }
}

TEST_CASE("thread count does not change output") {
    const Fixture f(5000, 23);
    const std::string one = csv_of(run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, 4, one_thread()));
    RunOptions many;
    many.threads = 4;
    for (int rep = 0; rep < 3; ++rep) {
        CHECK(csv_of(run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, 4, many)) == one);
    }
}

TEST_CASE("larger buffer leaves T-scoped output unchanged") {
    const Fixture f(6000, 29);
    const RunGeometry wide = RunGeometry::around(f.geometry.target, 0.8);
    // The generated catalog covers P for a 0.5 buffer; the wider run sees the
    // same galaxies.
    const RunResult a = run_sequential(f.catalog.galaxies, f.geometry, f.kcorr);
    const RunResult b = run_sequential(f.catalog.galaxies, wide, f.kcorr);
    CHECK(a.clusters == b.clusters);
    CHECK(a.members == b.members);
    std::vector<Candidate> a_t, b_t;
    for (const auto& c : a.candidates) if (f.geometry.target.contains(c.ra, c.dec)) a_t.push_back(c);
    for (const auto& c : b.candidates) if (f.geometry.target.contains(c.ra, c.dec)) b_t.push_back(c);
    CHECK(a_t == b_t);
}

TEST_CASE("merge is independent of input order") {
    Fixture f(3000, 31);
    const RunResult a = run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, 3, one_thread());
    std::reverse(f.catalog.galaxies.begin(), f.catalog.galaxies.end());
    const RunResult b = run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, 3, one_thread());
    CHECK(csv_of(a) == csv_of(b));
}

TEST_CASE("canonicalize rejects double ownership") {
    RunResult r;
    r.candidates = {{5, 1, 1, 0.1, 17, 2, 0.5}, {5, 1, 1, 0.1, 17, 2, 0.5}};
    CHECK_THROWS_AS(canonicalize(r), std::logic_error);
}

TEST_CASE("work counters show duplication") {
    const Fixture f;
    const RunResult seq = run_sequential(f.catalog.galaxies, f.geometry, f.kcorr);
    const RunResult par = run_partitioned(f.catalog.galaxies, f.geometry, f.kcorr, 3, one_thread());
    REQUIRE(par.metrics.partitions.size() == 3);
    CHECK(par.metrics.total_work() > seq.metrics.total_work());
    std::size_t loaded = 0;
    for (const auto& p : par.metrics.partitions) loaded += p.galaxies_loaded;
    CHECK(loaded > seq.metrics.partitions[0].galaxies_loaded);

    std::ostringstream s;
    write_metrics(s, par.metrics);
    const std::string text = s.str();
    for (const char* phase : {"zone_build", "candidate_phase", "cluster_phase", "total"}) {
        CHECK(text.find(phase) != std::string::npos);
    }
}
