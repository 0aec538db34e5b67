#ifndef MAXBCG_RESULTS_IO_HPP
#define MAXBCG_RESULTS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>

#include "maxbcg/bcg.hpp"
#include "maxbcg/partition.hpp"

namespace maxbcg {

inline constexpr const char* kCandidatesFile = "candidates.csv";
inline constexpr const char* kClustersFile = "clusters.csv";
inline constexpr const char* kMembersFile = "members.csv";
inline constexpr const char* kMetricsFile = "metrics.csv";

/// objid,ra,dec,z,i,ngal,chi2 (used for both candidates and clusters)
void write_candidates(std::ostream& out, std::span<const Candidate> rows);

/// clusterObjID,galaxyObjID,distance
void write_members(std::ostream& out, std::span<const ClusterMember> rows);

/// Writes the three result CSVs and the metrics report into `dir`.
void write_run(const std::filesystem::path& dir, const RunResult& result);

}  // namespace maxbcg

#endif  // MAXBCG_RESULTS_IO_HPP
