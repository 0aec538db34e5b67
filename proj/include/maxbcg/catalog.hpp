#ifndef MAXBCG_CATALOG_HPP
#define MAXBCG_CATALOG_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxbcg {

using ObjId = std::int64_t;

/// Thrown for malformed input files and violated preconditions on user data.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One row of an external photometric catalog (dereddened g, r, i).
struct RawGalaxy {
    ObjId objid = 0;
    double ra = 0.0;
    double dec = 0.0;
    double g = 0.0;
    double r = 0.0;
    double i = 0.0;
};

/// The five dimensions the cluster finder works on, plus color errors.
struct Galaxy {
    ObjId objid = 0;
    double ra = 0.0;
    double dec = 0.0;
    double i = 0.0;
    double gr = 0.0;
    double ri = 0.0;
    double sigmagr = 0.0;
    double sigmari = 0.0;

    friend bool operator==(const Galaxy&, const Galaxy&) = default;
};

/// Expected BCG properties at one redshift. ug and iz are carried for
/// format fidelity only.
struct KCorrEntry {
    int zid = 0;
    double z = 0.0;
    double i = 0.0;
    double ilim = 0.0;
    double ug = 0.0;
    double gr = 0.0;
    double ri = 0.0;
    double iz = 0.0;
    double radius = 0.0;  ///< angular size of 1 Mpc at z, degrees

    friend bool operator==(const KCorrEntry&, const KCorrEntry&) = default;
};

/// Redshift lookup table ordered by zid. Construction validates that z is
/// strictly increasing and radius positive and non-increasing.
class KCorrTable {
public:
    KCorrTable() = default;
    explicit KCorrTable(std::vector<KCorrEntry> entries);

    std::span<const KCorrEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const KCorrEntry& operator[](std::size_t idx) const { return entries_[idx]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    double max_radius() const { return max_radius_; }

    /// Entry with |entry.z - z| < tol, or nullptr.
    const KCorrEntry* find_by_z(double z, double tol = 1e-7) const;

    /// Entry by 1-based zid, or nullptr.
    const KCorrEntry* find_by_zid(int zid) const;

private:
    std::vector<KCorrEntry> entries_;
    double max_radius_ = 0.0;
};

struct BCGParams {
    double mag_dispersion = 0.57;  // population dispersion of BCG magnitudes
    double gr_pop_sigma = 0.05;
    double ri_pop_sigma = 0.06;
    double chisq_threshold = 7.0;
    double z_window = 0.05;
    double chi_tie_tol = 1e-5;     // is_cluster maximum test
    double chi_select_tol = 1e-8;  // picking the redshift that attains the maximum
    double member_mag_slack = 0.001;

    void validate() const;
};

/// Closed ra/dec box. Must not straddle ra = 0/360.
struct RegionBounds {
    double min_ra = 0.0;
    double max_ra = 0.0;
    double min_dec = 0.0;
    double max_dec = 0.0;

    bool contains(double ra, double dec) const {
        return ra >= min_ra && ra <= max_ra && dec >= min_dec && dec <= max_dec;
    }
    RegionBounds expanded(double margin) const {
        return {min_ra - margin, max_ra + margin, min_dec - margin, max_dec + margin};
    }
    void validate() const;

    friend bool operator==(const RegionBounds&, const RegionBounds&) = default;
};

/// Parses "MINRA,MAXRA,MINDEC,MAXDEC".
RegionBounds parse_region(const std::string& text);

double sigma_gr(double i_mag);
double sigma_ri(double i_mag);

Galaxy derive_galaxy(const RawGalaxy& raw);

/// Reads a raw catalog CSV (objid,ra,dec,dered_g,dered_r,dered_i) and keeps
/// the rows inside the closed region.
std::vector<Galaxy> ingest_galaxies(std::istream& source, const RegionBounds& region);

/// Reads a derived galaxy CSV (objid,ra,dec,i,gr,ri,sigmagr,sigmari).
std::vector<Galaxy> read_galaxies(std::istream& source);

/// Dispatches on the header line: raw rows are derived and region-filtered,
/// derived rows are region-filtered as-is.
std::vector<Galaxy> read_any_galaxies(std::istream& source, const RegionBounds& region);

void write_galaxies(std::ostream& out, std::span<const Galaxy> galaxies);

KCorrTable load_kcorr(std::istream& source);
void write_kcorr(std::ostream& out, const KCorrTable& table);

}  // namespace maxbcg

#endif  // MAXBCG_CATALOG_HPP
