#include "maxbcg/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "maxbcg/csv.hpp"

namespace maxbcg {

namespace {

constexpr std::string_view kRawHeader = "objid,ra,dec,dered_g,dered_r,dered_i";
constexpr std::string_view kGalaxyHeader = "objid,ra,dec,i,gr,ri,sigmagr,sigmari";
constexpr std::string_view kKCorrHeader = "zid,z,i,ilim,ug,gr,ri,iz,radius";

void check_position(const csv::Reader& reader, double ra, double dec) {
    if (!(ra >= 0.0 && ra < 360.0)) reader.fail("ra out of range [0,360): " + csv::format_double(ra));
    if (!(dec >= -90.0 && dec <= 90.0)) reader.fail("dec out of range [-90,90]: " + csv::format_double(dec));
}

void check_field_count(const csv::Reader& reader, std::size_t got, std::size_t want) {
    if (got != want) {
        reader.fail("expected " + std::to_string(want) + " fields, got " + std::to_string(got));
    }
}

class DuplicateGuard {
public:
    void insert(const csv::Reader& reader, ObjId id) {
        if (!seen_.insert(id).second) reader.fail("duplicate objid " + std::to_string(id));
    }

private:
    std::unordered_set<ObjId> seen_;
};

std::vector<Galaxy> ingest_rows(csv::Reader& reader, const RegionBounds& region) {
    std::vector<Galaxy> out;
    std::vector<std::string_view> f;
    DuplicateGuard guard;
    while (reader.next(f)) {
        check_field_count(reader, f.size(), 6);
        RawGalaxy raw;
        raw.objid = reader.to_int64(f[0], "objid");
        raw.ra = reader.to_double(f[1], "ra");
        raw.dec = reader.to_double(f[2], "dec");
        raw.g = reader.to_double(f[3], "dered_g");
        raw.r = reader.to_double(f[4], "dered_r");
        raw.i = reader.to_double(f[5], "dered_i");
        check_position(reader, raw.ra, raw.dec);
        guard.insert(reader, raw.objid);
        if (region.contains(raw.ra, raw.dec)) out.push_back(derive_galaxy(raw));
    }
    return out;
}

std::vector<Galaxy> derived_rows(csv::Reader& reader, const RegionBounds* region) {
    std::vector<Galaxy> out;
    std::vector<std::string_view> f;
    DuplicateGuard guard;
    while (reader.next(f)) {
        check_field_count(reader, f.size(), 8);
        Galaxy g;
        g.objid = reader.to_int64(f[0], "objid");
        g.ra = reader.to_double(f[1], "ra");
        g.dec = reader.to_double(f[2], "dec");
        g.i = reader.to_double(f[3], "i");
        g.gr = reader.to_double(f[4], "gr");
        g.ri = reader.to_double(f[5], "ri");
        g.sigmagr = reader.to_double(f[6], "sigmagr");
        g.sigmari = reader.to_double(f[7], "sigmari");
        check_position(reader, g.ra, g.dec);
        if (!(g.sigmagr > 0.0) || !(g.sigmari > 0.0)) reader.fail("color errors must be positive");
        guard.insert(reader, g.objid);
        if (region == nullptr || region->contains(g.ra, g.dec)) out.push_back(g);
    }
    return out;
}

}  // namespace

KCorrTable::KCorrTable(std::vector<KCorrEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        const std::string where = "kcorr row " + std::to_string(k + 1) + " (zid " + std::to_string(e.zid) + ")";
        if (!(e.radius > 0.0)) throw ValidationError(where + ": radius must be positive");
        if (k > 0) {
            const auto& prev = entries_[k - 1];
            if (!(e.zid > prev.zid)) throw ValidationError(where + ": zid not increasing");
            if (!(e.z > prev.z)) throw ValidationError(where + ": z not strictly increasing");
            if (e.radius > prev.radius) throw ValidationError(where + ": radius increases with z");
        }
        max_radius_ = std::max(max_radius_, e.radius);
    }
}

const KCorrEntry* KCorrTable::find_by_z(double z, double tol) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), z - tol,
                               [](const KCorrEntry& e, double v) { return e.z <= v; });
    if (it != entries_.end() && std::abs(it->z - z) < tol) return &*it;
    return nullptr;
}

const KCorrEntry* KCorrTable::find_by_zid(int zid) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), zid,
                               [](const KCorrEntry& e, int v) { return e.zid < v; });
    if (it != entries_.end() && it->zid == zid) return &*it;
    return nullptr;
}

void BCGParams::validate() const {
    for (double v : {mag_dispersion, gr_pop_sigma, ri_pop_sigma, chisq_threshold, z_window, chi_tie_tol,
                     chi_select_tol, member_mag_slack}) {
        if (!(v > 0.0)) throw ValidationError("BCG parameters must be strictly positive");
    }
}

void RegionBounds::validate() const {
    if (!(min_ra < max_ra) || !(min_dec < max_dec)) {
        throw ValidationError("region bounds must satisfy min < max");
    }
    if (min_ra < 0.0 || max_ra > 360.0) {
        throw ValidationError("region must not cross ra = 0/360");
    }
    if (min_dec < -90.0 || max_dec > 90.0) throw ValidationError("region dec outside [-90, 90]");
}

RegionBounds parse_region(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> v;
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ValidationError("bad region '" + text + "': expected MINRA,MAXRA,MINDEC,MAXDEC");
        }
    }
    if (v.size() != 4) throw ValidationError("bad region '" + text + "': expected MINRA,MAXRA,MINDEC,MAXDEC");
    RegionBounds region{v[0], v[1], v[2], v[3]};
    region.validate();
    return region;
}

double sigma_gr(double i_mag) { return 2.089 * std::pow(10.0, 0.228 * i_mag - 6.0); }
double sigma_ri(double i_mag) { return 4.266 * std::pow(10.0, 0.206 * i_mag - 6.0); }

Galaxy derive_galaxy(const RawGalaxy& raw) {
    Galaxy g;
    g.objid = raw.objid;
    g.ra = raw.ra;
    g.dec = raw.dec;
    g.i = raw.i;
    g.gr = raw.g - raw.r;
    g.ri = raw.r - raw.i;
    g.sigmagr = sigma_gr(raw.i);
    g.sigmari = sigma_ri(raw.i);
    return g;
}

std::vector<Galaxy> ingest_galaxies(std::istream& source, const RegionBounds& region) {
    region.validate();
    csv::Reader reader(source);
    auto header = reader.header();
    if (header.empty()) return {};
    if (header != kRawHeader) reader.fail("raw catalog: expected header '" + std::string(kRawHeader) + "'");
    return ingest_rows(reader, region);
}

std::vector<Galaxy> read_galaxies(std::istream& source) {
    csv::Reader reader(source);
    auto header = reader.header();
    if (header.empty()) return {};
    if (header != kGalaxyHeader) reader.fail("galaxy catalog: expected header '" + std::string(kGalaxyHeader) + "'");
    return derived_rows(reader, nullptr);
}

std::vector<Galaxy> read_any_galaxies(std::istream& source, const RegionBounds& region) {
    region.validate();
    csv::Reader reader(source);
    auto header = reader.header();
    if (header.empty()) return {};
    if (header == kRawHeader) return ingest_rows(reader, region);
    if (header == kGalaxyHeader) return derived_rows(reader, &region);
    reader.fail("unrecognized galaxy header '" + header + "'");
}

void write_galaxies(std::ostream& out, std::span<const Galaxy> galaxies) {
    using csv::format_double;
    out << kGalaxyHeader << '\n';
    for (const auto& g : galaxies) {
        out << g.objid << ',' << format_double(g.ra) << ',' << format_double(g.dec) << ',' << format_double(g.i)
            << ',' << format_double(g.gr) << ',' << format_double(g.ri) << ',' << format_double(g.sigmagr) << ','
            << format_double(g.sigmari) << '\n';
    }
}

KCorrTable load_kcorr(std::istream& source) {
    csv::Reader reader(source);
    reader.expect_header(kKCorrHeader, "kcorr table");
    std::vector<KCorrEntry> entries;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        check_field_count(reader, f.size(), 9);
        KCorrEntry e;
        e.zid = static_cast<int>(reader.to_int64(f[0], "zid"));
        e.z = reader.to_double(f[1], "z");
        e.i = reader.to_double(f[2], "i");
        e.ilim = reader.to_double(f[3], "ilim");
        e.ug = reader.to_double(f[4], "ug");
        e.gr = reader.to_double(f[5], "gr");
        e.ri = reader.to_double(f[6], "ri");
        e.iz = reader.to_double(f[7], "iz");
        e.radius = reader.to_double(f[8], "radius");
        entries.push_back(e);
    }
    return KCorrTable(std::move(entries));
}

void write_kcorr(std::ostream& out, const KCorrTable& table) {
    using csv::format_double;
    out << kKCorrHeader << '\n';
    for (const auto& e : table) {
        out << e.zid << ',' << format_double(e.z) << ',' << format_double(e.i) << ',' << format_double(e.ilim) << ','
            << format_double(e.ug) << ',' << format_double(e.gr) << ',' << format_double(e.ri) << ','
            << format_double(e.iz) << ',' << format_double(e.radius) << '\n';
    }
}

}  // namespace maxbcg
