#include "maxbcg/metrics.hpp"

#include <ostream>

#include "maxbcg/csv.hpp"

namespace maxbcg {

std::uint64_t PartitionMetrics::work() const {
    return galaxies_loaded + galaxies_evaluated + cluster_tests + candidate_queries.distance_tests +
           cluster_queries.distance_tests + member_queries.distance_tests;
}

std::uint64_t RunMetrics::total_work() const {
    std::uint64_t sum = 0;
    for (const auto& p : partitions) sum += p.work();
    return sum;
}

double RunMetrics::cpu_seconds() const {
    double sum = 0.0;
    for (const auto& p : partitions) sum += p.total_seconds();
    return sum;
}

void write_metrics(std::ostream& out, const RunMetrics& metrics) {
    using csv::format_double;
    out << "partition,phase,elapsed_s,items,distance_tests\n";
    auto row = [&](const std::string& part, const char* phase, double secs, std::uint64_t items,
                   std::uint64_t tests) {
        out << part << ',' << phase << ',' << format_double(secs) << ',' << items << ',' << tests << '\n';
    };
    for (std::size_t k = 0; k < metrics.partitions.size(); ++k) {
        const auto& p = metrics.partitions[k];
        const std::string name = "P" + std::to_string(k + 1);
        row(name, "zone_build", p.zone_seconds, p.galaxies_loaded, 0);
        row(name, "candidate_phase", p.candidate_seconds, p.galaxies_evaluated, p.candidate_queries.distance_tests);
        row(name, "cluster_phase", p.cluster_seconds, p.cluster_tests, p.cluster_queries.distance_tests);
        row(name, "member_phase", p.member_seconds, p.clusters_found, p.member_queries.distance_tests);
        row(name, "total", p.total_seconds(), p.work(),
            p.candidate_queries.distance_tests + p.cluster_queries.distance_tests + p.member_queries.distance_tests);
    }
    std::uint64_t tests = 0;
    for (const auto& p : metrics.partitions) {
        tests += p.candidate_queries.distance_tests + p.cluster_queries.distance_tests +
                 p.member_queries.distance_tests;
    }
    row("all", "cpu", metrics.cpu_seconds(), metrics.total_work(), tests);
    row("all", "wall", metrics.wall_seconds, metrics.total_work(), tests);
}

}  // namespace maxbcg
