#include "maxbcg/results_io.hpp"

#include <fstream>
#include <ostream>

#include "maxbcg/csv.hpp"

namespace maxbcg {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

}  // namespace

void write_candidates(std::ostream& out, std::span<const Candidate> rows) {
    using csv::format_double;
    out << "objid,ra,dec,z,i,ngal,chi2\n";
    for (const auto& c : rows) {
        out << c.objid << ',' << format_double(c.ra) << ',' << format_double(c.dec) << ',' << format_double(c.z)
            << ',' << format_double(c.i) << ',' << c.ngal << ',' << format_double(c.chi2) << '\n';
    }
}

void write_members(std::ostream& out, std::span<const ClusterMember> rows) {
    out << "clusterObjID,galaxyObjID,distance\n";
    for (const auto& m : rows) {
        out << m.cluster_objid << ',' << m.galaxy_objid << ',' << csv::format_double(m.distance) << '\n';
    }
}

void write_run(const std::filesystem::path& dir, const RunResult& result) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
    {
        auto out = open_for_write(dir / kCandidatesFile);
        write_candidates(out, result.candidates);
    }
    {
        auto out = open_for_write(dir / kClustersFile);
        write_candidates(out, result.clusters);
    }
    {
        auto out = open_for_write(dir / kMembersFile);
        write_members(out, result.members);
    }
    auto out = open_for_write(dir / kMetricsFile);
    write_metrics(out, result.metrics);
}

}  // namespace maxbcg
