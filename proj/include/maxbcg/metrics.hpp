#ifndef MAXBCG_METRICS_HPP
#define MAXBCG_METRICS_HPP

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "maxbcg/zone_index.hpp"

namespace maxbcg {

/// Per-partition phase timings and work counters: zone build, candidate,
/// cluster and member phases.
struct PartitionMetrics {
    std::size_t galaxies_loaded = 0;

    double zone_seconds = 0.0;
    double candidate_seconds = 0.0;
    double cluster_seconds = 0.0;
    double member_seconds = 0.0;

    std::uint64_t galaxies_evaluated = 0;
    std::uint64_t candidates_found = 0;
    std::uint64_t cluster_tests = 0;
    std::uint64_t clusters_found = 0;
    std::uint64_t members_found = 0;

    QueryStats candidate_queries;
    QueryStats cluster_queries;
    QueryStats member_queries;

    double total_seconds() const { return zone_seconds + candidate_seconds + cluster_seconds + member_seconds; }

    /// Abstract work: objects zoned plus objects evaluated plus distance tests.
    std::uint64_t work() const;
};

struct RunMetrics {
    std::vector<PartitionMetrics> partitions;
    double wall_seconds = 0.0;

    std::uint64_t total_work() const;
    double cpu_seconds() const;
};

/// CSV with one row per partition and phase:
/// partition,phase,elapsed_s,items,distance_tests
void write_metrics(std::ostream& out, const RunMetrics& metrics);

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace maxbcg

#endif  // MAXBCG_METRICS_HPP
