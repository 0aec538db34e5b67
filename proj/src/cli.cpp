#include "maxbcg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "maxbcg/catalog.hpp"
#include "maxbcg/csv.hpp"
#include "maxbcg/oracle_check.hpp"
#include "maxbcg/partition.hpp"
#include "maxbcg/results_io.hpp"
#include "maxbcg/synthetic.hpp"

namespace maxbcg::cli {

namespace fs = std::filesystem;

namespace {

/// Inputs come either from files or from the synthetic generator.
struct RunConfig {
    std::string galaxies;
    std::string kcorr;
    std::string target;
    std::string coverage;
    double buffer = 0.5;
    int partitions = 1;
    double zone_arcsec = 30.0;
    unsigned threads = 0;
    std::string out;
    std::optional<std::uint64_t> seed;

    std::size_t field = 10000;
    int clusters = 5;
    int members = 10;
    double zmin = 0.05;
    double zmax = 0.3;
    int kcorr_steps = 1000;
    double radius_cap = 0.5;

};

struct Inputs {
    std::vector<Galaxy> galaxies;
    KCorrTable kcorr;
    RunGeometry geometry;
    RegionBounds coverage;
    std::vector<PlantedRecord> planted;
};

void add_geometry_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--target", cfg.target, "Target area MINRA,MAXRA,MINDEC,MAXDEC")->required();
    cmd->add_option("--buffer", cfg.buffer, "Buffer width in degrees")->capture_default_str();
    cmd->add_option("--zone-height", cfg.zone_arcsec, "Zone height in arcsec")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Concurrent partitions (default: core count)");
}

void add_synthetic_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "Random seed for synthetic data");
    cmd->add_option("--field", cfg.field, "Synthetic field galaxies")->capture_default_str();
    cmd->add_option("--clusters", cfg.clusters, "Planted clusters")->capture_default_str();
    cmd->add_option("--members", cfg.members, "Members per planted cluster")->capture_default_str();
    cmd->add_option("--zmin", cfg.zmin, "Lowest planted redshift")->capture_default_str();
    cmd->add_option("--zmax", cfg.zmax, "Highest planted redshift")->capture_default_str();
    cmd->add_option("--kcorr-steps", cfg.kcorr_steps, "Synthetic kcorr rows")->capture_default_str();
    cmd->add_option("--radius-cap", cfg.radius_cap, "Cap on the synthetic 1 Mpc radius, degrees")
        ->capture_default_str();
}

void add_input_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--galaxies", cfg.galaxies, "Galaxy CSV (raw or derived)");
    cmd->add_option("--kcorr", cfg.kcorr, "K-correction CSV");
    cmd->add_option("--coverage", cfg.coverage,
                    "Sky area the galaxy file covers, MINRA,MAXRA,MINDEC,MAXDEC (default: its bounding box)");
    add_synthetic_flags(cmd, cfg);
    add_geometry_flags(cmd, cfg);
}

ZoneConfig zone_config(const RunConfig& cfg) {
    ZoneConfig zone;
    zone.zone_height = cfg.zone_arcsec / 3600.0;
    zone.validate();
    return zone;
}

std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(std::string("cannot open ") + what + " '" + path + "'");
    return in;
}

SyntheticCatalog synthesize(const RunConfig& cfg, const RunGeometry& geometry, const KCorrTable& kcorr) {
    // Clusters further apart than twice the 1 Mpc radius at the lowest
    // planted redshift cannot suppress one another.
    const double sep = 2.05 * std::min(cfg.radius_cap, kAngularScale / cfg.zmin);
    auto planted = place_isolated_clusters(geometry.target, cfg.clusters, cfg.members, sep,
                                           cfg.zmin, cfg.zmax, *cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    return generate_synthetic_catalog(geometry.data_area, cfg.field, planted, kcorr, *cfg.seed);
}

RegionBounds bounding_box(const std::vector<Galaxy>& galaxies) {
    if (galaxies.empty()) throw ValidationError("galaxy input is empty within the data area");
    RegionBounds box{galaxies[0].ra, galaxies[0].ra, galaxies[0].dec, galaxies[0].dec};
    for (const auto& g : galaxies) {
        box.min_ra = std::min(box.min_ra, g.ra);
        box.max_ra = std::max(box.max_ra, g.ra);
        box.min_dec = std::min(box.min_dec, g.dec);
        box.max_dec = std::max(box.max_dec, g.dec);
    }
    return box;
}

/// The data area must lie inside the data coverage, up to one zone height
/// of slack for sampling gaps at the edges.
void check_coverage(const RunGeometry& geometry, const RegionBounds& coverage, double slack) {
    const auto& P = geometry.data_area;
    auto fail = [&](const char* side, double by) {
        std::ostringstream s;
        s << "data area (target + 2 x " << geometry.buffer_width << " deg buffer) exceeds the data coverage on the "
          << side << " margin by " << by << " deg";
        throw ValidationError(s.str());
    };
    if (P.min_dec < coverage.min_dec - slack) fail("south (min dec)", coverage.min_dec - P.min_dec);
    if (P.max_dec > coverage.max_dec + slack) fail("north (max dec)", P.max_dec - coverage.max_dec);
    if (P.min_ra < coverage.min_ra - slack) fail("east (min ra)", coverage.min_ra - P.min_ra);
    if (P.max_ra > coverage.max_ra + slack) fail("west (max ra)", P.max_ra - coverage.max_ra);
}

Inputs load_inputs(const RunConfig& cfg) {
    const bool from_files = !cfg.galaxies.empty() || !cfg.kcorr.empty();
    const bool synthetic = cfg.seed.has_value();
    if (from_files == synthetic) {
        throw ValidationError("supply either --galaxies and --kcorr, or --seed for synthetic data (not both)");
    }
    Inputs in;
    const RegionBounds target = parse_region(cfg.target);
    in.geometry = RunGeometry::around(target, cfg.buffer);
    const ZoneConfig zone = zone_config(cfg);

    if (synthetic) {
        in.kcorr = generate_synthetic_kcorr(cfg.kcorr_steps, cfg.radius_cap);
        in.geometry.validate(in.kcorr);
        auto catalog = synthesize(cfg, in.geometry, in.kcorr);
        in.galaxies = std::move(catalog.galaxies);
        in.planted = std::move(catalog.planted);
        in.coverage = in.geometry.data_area;
        return in;
    }

    if (cfg.galaxies.empty()) throw ValidationError("missing --galaxies");
    if (cfg.kcorr.empty()) throw ValidationError("missing --kcorr");
    auto kin = open_input(cfg.kcorr, "kcorr file");
    in.kcorr = load_kcorr(kin);
    in.geometry.validate(in.kcorr);
    auto gin = open_input(cfg.galaxies, "galaxy file");
    in.galaxies = read_any_galaxies(gin, in.geometry.data_area);
    in.coverage = cfg.coverage.empty() ? bounding_box(in.galaxies) : parse_region(cfg.coverage);
    check_coverage(in.geometry, in.coverage, zone.zone_height);
    return in;
}

RunResult execute(const Inputs& in, const RunConfig& cfg, int partitions) {
    RunOptions options;
    options.zone = zone_config(cfg);
    options.threads = cfg.threads;
    if (partitions == 1) return run_sequential(in.galaxies, in.geometry, in.kcorr, options);
    return run_partitioned(in.galaxies, in.geometry, in.kcorr, partitions, options);
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.seed) throw ValidationError("generate requires --seed");
    if (cfg.out.empty()) throw ValidationError("generate requires --out");
    const RunGeometry geometry = RunGeometry::around(parse_region(cfg.target), cfg.buffer);
    const KCorrTable kcorr = generate_synthetic_kcorr(cfg.kcorr_steps, cfg.radius_cap);
    geometry.validate(kcorr);
    const SyntheticCatalog catalog = synthesize(cfg, geometry, kcorr);

    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
    auto open = [](const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + p.string());
        return f;
    };
    {
        auto f = open(dir / "galaxies.csv");
        write_galaxies(f, catalog.galaxies);
    }
    {
        auto f = open(dir / "kcorr.csv");
        write_kcorr(f, kcorr);
    }
    {
        auto f = open(dir / "planted.csv");
        f << "bcgObjID,zid,z,members\n";
        for (const auto& p : catalog.planted) {
            f << p.bcg << ',' << p.zid << ',' << csv::format_double(kcorr.find_by_zid(p.zid)->z) << ','
              << p.members.size() << '\n';
        }
    }
    out << "galaxies: " << catalog.galaxies.size() << "\nkcorr rows: " << kcorr.size()
        << "\nplanted clusters: " << catalog.planted.size() << "\nwritten to " << dir.string() << '\n';
    return kOk;
}

int cmd_find_clusters(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) throw ValidationError("find-clusters requires --out");
    if (cfg.partitions < 1) throw ValidationError("--partitions must be at least 1");
    const Inputs in = load_inputs(cfg);
    const RunResult result = execute(in, cfg, cfg.partitions);
    write_run(cfg.out, result);
    out << "galaxies: " << in.galaxies.size() << "\ncandidates: " << result.candidates.size()
        << "\nclusters: " << result.clusters.size() << "\nmembers: " << result.members.size()
        << "\npartitions: " << cfg.partitions << "\nwall seconds: " << result.metrics.wall_seconds << '\n';
    return kOk;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cmd_compare(const std::string& a, const std::string& b, std::ostream& out) {
    for (const auto* dir : {&a, &b}) {
        for (const char* name : {kCandidatesFile, kClustersFile, kMembersFile}) {
            if (!fs::is_regular_file(fs::path(*dir) / name)) {
                throw ValidationError("missing " + (fs::path(*dir) / name).string());
            }
        }
    }
    bool identical = true;
    for (const char* name : {kCandidatesFile, kClustersFile, kMembersFile}) {
        const fs::path pa = fs::path(a) / name, pb = fs::path(b) / name;
        if (read_bytes(pa) == read_bytes(pb)) {
            out << name << ": identical\n";
            continue;
        }
        identical = false;
        const auto la = read_lines(pa), lb = read_lines(pb);
        std::size_t k = 0;
        while (k < la.size() && k < lb.size() && la[k] == lb[k]) ++k;
        out << name << ": differs at line " << (k + 1) << " (" << la.size() << " vs " << lb.size() << " lines)\n"
            << "  " << a << ": " << (k < la.size() ? la[k] : "<end of file>") << '\n'
            << "  " << b << ": " << (k < lb.size() ? lb[k] : "<end of file>") << '\n';
    }
    out << (identical ? "identical\n" : "outputs differ\n");
    return identical ? kOk : kMismatch;
}

int cmd_bench(const RunConfig& cfg, const std::vector<int>& counts, std::ostream& out) {
    if (counts.empty()) throw ValidationError("--counts needs at least one partition count");
    const Inputs in = load_inputs(cfg);
    struct Row {
        int n;
        RunResult result;
    };
    std::vector<Row> rows;
    for (int n : counts) {
        if (n < 1) throw ValidationError("partition counts must be at least 1");
        rows.push_back({n, execute(in, cfg, n)});
    }

    out << "galaxies: " << in.galaxies.size() << "\n";
    out << "partitions,wall_s,cpu_s,zone_s,candidate_s,cluster_s,member_s,work,candidates,clusters,same_as_first\n";
    const RunResult& base = rows.front().result;
    for (const auto& row : rows) {
        const auto& m = row.result.metrics;
        double zone = 0, cand = 0, clus = 0, mem = 0;
        for (const auto& p : m.partitions) {
            zone += p.zone_seconds;
            cand += p.candidate_seconds;
            clus += p.cluster_seconds;
            mem += p.member_seconds;
        }
        const bool same = row.result.candidates == base.candidates && row.result.clusters == base.clusters &&
                          row.result.members == base.members;
        out << row.n << ',' << m.wall_seconds << ',' << m.cpu_seconds() << ',' << zone << ',' << cand << ',' << clus
            << ',' << mem << ',' << m.total_work() << ',' << row.result.candidates.size() << ','
            << row.result.clusters.size() << ',' << (same ? "yes" : "no") << '\n';
    }
    const auto& first = rows.front();
    for (const auto& row : rows) {
        if (&row == &first && rows.size() > 1) continue;
        const double wall = 100.0 * row.result.metrics.wall_seconds / std::max(first.result.metrics.wall_seconds, 1e-12);
        const double work = 100.0 * static_cast<double>(row.result.metrics.total_work()) /
                            std::max<double>(1.0, static_cast<double>(first.result.metrics.total_work()));
        out << "ratio " << row.n << "-way/" << first.n << "-way: wall " << std::fixed << std::setprecision(0) << wall
            << "%, work " << work << "%\n";
        out << std::defaultfloat << std::setprecision(6);
    }
    return kOk;
}

int cmd_oracle_check(int trials, std::uint64_t seed, double zone_arcsec, double mutate, std::ostream& out) {
    if (trials < 0) throw ValidationError("--trials must be non-negative");
    ZoneConfig zone;
    zone.zone_height = zone_arcsec / 3600.0;
    zone.ra_window_scale = mutate;
    zone.validate();
    std::size_t queries = 0, rows = 0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        auto nb = neighbor_trial(s, zone);
        if (!nb.ok) {
            out << "FAIL neighbor trial, seed " << s << ": " << nb.detail << '\n';
            return kMismatch;
        }
        auto pl = pipeline_trial(s, zone);
        if (!pl.ok) {
            out << "FAIL pipeline trial, seed " << s << ": " << pl.detail << '\n';
            return kMismatch;
        }
        queries += nb.comparisons;
        rows += pl.comparisons;
    }
    out << "oracle-check: " << trials << " trials agree (" << queries << " cone queries, " << rows
        << " pipeline rows)\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MaxBCG galaxy cluster finder over a zone-indexed catalog", "maxbcg"};
    app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
    app.require_subcommand(1);

    RunConfig cfg;
    auto* generate = app.add_subcommand("generate", "Write a synthetic galaxy catalog and kcorr table");
    add_synthetic_flags(generate, cfg);
    add_geometry_flags(generate, cfg);
    generate->add_option("--out", cfg.out, "Output directory")->required();

    auto* find = app.add_subcommand("find-clusters", "Run the cluster finder");
    add_input_flags(find, cfg);
    find->add_option("--partitions", cfg.partitions, "Declination slabs run independently")->capture_default_str();
    find->add_option("--out", cfg.out, "Output directory")->required();

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "Compare two result directories");
    compare->add_option("first", dir_a, "Result directory")->required();
    compare->add_option("second", dir_b, "Result directory")->required();

    std::vector<int> counts{1, 3};
    auto* bench = app.add_subcommand("bench", "Time the pipeline at several partition counts");
    add_input_flags(bench, cfg);
    bench->add_option("--counts", counts, "Partition counts, e.g. 1,3")->delimiter(',')->capture_default_str();

    int trials = 100;
    std::uint64_t oracle_seed = 1;
    double mutate = 1.0;
    auto* oracle = app.add_subcommand("oracle-check", "Randomized equivalence against brute force");
    oracle->add_option("--trials", trials, "Number of randomized trials")->capture_default_str();
    oracle->add_option("--seed", oracle_seed, "First trial seed")->capture_default_str();
    oracle->add_option("--zone-height", cfg.zone_arcsec, "Zone height in arcsec")->capture_default_str();
    oracle->add_option("--mutate-ra-window", mutate, "Scale ra windows (harness self-test)")->group("");

    // The config file belongs to the top-level app; hoist it so it may also
    // be written after the subcommand.
    std::vector<std::string> argv_storage{"maxbcg"};
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            argv_storage.push_back(args[k]);
            argv_storage.push_back(args[++k]);
        } else if (args[k].rfind("--config=", 0) == 0) {
            argv_storage.push_back(args[k]);
        } else {
            rest.push_back(args[k]);
        }
    }
    argv_storage.insert(argv_storage.end(), rest.begin(), rest.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }

    try {
        if (generate->parsed()) return cmd_generate(cfg, out);
        if (find->parsed()) return cmd_find_clusters(cfg, out);
        if (compare->parsed()) return cmd_compare(dir_a, dir_b, out);
        if (bench->parsed()) return cmd_bench(cfg, counts, out);
        if (oracle->parsed()) return cmd_oracle_check(trials, oracle_seed, cfg.zone_arcsec, mutate, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return kValidationError;
}

}  // namespace maxbcg::cli
