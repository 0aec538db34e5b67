#ifndef MAXBCG_PARTITION_HPP
#define MAXBCG_PARTITION_HPP

#include <span>
#include <vector>

#include "maxbcg/bcg.hpp"
#include "maxbcg/catalog.hpp"
#include "maxbcg/metrics.hpp"
#include "maxbcg/zone_index.hpp"

namespace maxbcg {

/// Target area T, candidate area B = T + buffer, data area P = B + buffer.
struct RunGeometry {
    RegionBounds target;
    RegionBounds candidate_area;
    RegionBounds data_area;
    double buffer_width = 0.5;

    static RunGeometry around(const RegionBounds& target, double buffer_width = 0.5);

    /// Throws ValidationError unless T is a valid region, P stays within the
    /// sphere without wrapping, and the buffer covers every k-table radius.
    void validate(const KCorrTable& kcorr) const;
};

/// Declination interval. Half-open [lo, hi) unless closed_top.
struct DecInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_top = true;

    bool contains(double dec) const { return dec >= lo && (closed_top ? dec <= hi : dec < hi); }
    friend bool operator==(const DecInterval&, const DecInterval&) = default;
};

/// One independent slab. owned_target and owned_candidate decide which
/// outputs the slab reports; candidate_eval is where it computes candidates
/// (owned_target plus one buffer, overlapping its neighbors); loaded_data is
/// what it reads (candidate_eval plus one buffer).
struct Partition {
    DecInterval owned_target;
    DecInterval owned_candidate;
    DecInterval candidate_eval;
    DecInterval loaded_data;
    std::size_t estimated_load = 0;
};

struct PartitionPlan {
    RunGeometry geometry;
    std::vector<Partition> parts;
};

struct RunResult {
    std::vector<Candidate> candidates;  // ascending objid
    std::vector<Cluster> clusters;      // ascending objid
    std::vector<ClusterMember> members; // ascending (cluster, galaxy)
    RunMetrics metrics;
};

struct RunOptions {
    ZoneConfig zone;
    BCGParams params;
    /// Partitions executed concurrently; 0 means hardware concurrency.
    unsigned threads = 0;
};

/// Cuts T along zone boundaries into n slabs with balanced galaxy counts.
PartitionPlan plan_partitions(std::span<const Galaxy> galaxies, const RunGeometry& geometry, int n,
                              const KCorrTable& kcorr, const ZoneConfig& zone = {});

RunResult run_sequential(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                         const RunOptions& options = {});

RunResult run_partitioned(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const KCorrTable& kcorr,
                          int n, const RunOptions& options = {});

/// Runs one already-planned slab; the building block of both runners.
struct SlabOutput {
    std::vector<Candidate> candidates;
    std::vector<Cluster> clusters;
    std::vector<ClusterMember> members;
    PartitionMetrics metrics;
};

SlabOutput run_slab(std::span<const Galaxy> galaxies, const RunGeometry& geometry, const Partition& slab,
                    const KCorrTable& kcorr, const RunOptions& options);

/// Sorts outputs into canonical order and rejects duplicate ownership.
void canonicalize(RunResult& result);

}  // namespace maxbcg

#endif  // MAXBCG_PARTITION_HPP
