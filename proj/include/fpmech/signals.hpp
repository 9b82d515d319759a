#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fpmech {

inline constexpr int kNumSignals = 19;

// Fixed signal order; enrichment columns follow it.
inline constexpr std::array<const char*, kNumSignals> kSignalNames = {
    "bulky",           "flex_risk",      "rotatable_burden", "hydrophobic",
    "bulky_contact",   "charge",         "hbond_donor",      "hbond_acceptor",
    "aromatic",        "total_contact_burden",
    "is_PHE",          "is_TYR",         "is_HIS",           "is_ALA",
    "aux_polarity",    "aux_volume",     "aux_is_GLY",       "aux_is_PRO",
    "aux_net_hbond"};

using SeedVector = std::array<double, kNumSignals>;

// Per-amino-acid physicochemical seed signals. 20 standard rows plus a
// fallback row for unknown codes (zero identity flags, mean family signals).
// Values come from standard scales; the table is hash-versioned and swappable
// through its delimited-text form.
class SeedTable {
public:
    static SeedTable builtin();
    static SeedTable load(const std::string& path);
    static SeedTable parse(const std::string& text);

    std::string serialize() const;     // canonical delimited text
    void save(const std::string& path) const;
    std::string content_hash() const;  // FNV-1a of the canonical text

    const SeedVector& seed_vector(std::string_view aa3) const;
    const std::map<std::string, SeedVector>& rows() const { return rows_; }
    const SeedVector& fallback() const { return fallback_; }

private:
    std::map<std::string, SeedVector> rows_;  // keyed by three-letter code
    SeedVector fallback_{};
};

struct FeatureSchema {
    std::vector<std::string> candidate_columns;  // 121 = 57 + 57 + 7
    std::vector<std::string> family_columns;     // 73 = 66 + 7
    std::vector<std::string> nonid_columns;      // 52 = 45 + 7

    // condition subsets (all in candidate order)
    std::vector<std::string> steric_nonid;       // 21
    std::vector<std::string> hydrophobic_nonid;  // 24
    std::vector<std::string> enrichment_nonid;   // 45
    std::vector<std::string> clamp_columns;      // 7

    std::string schema_hash() const;

    // The 121-column layout plus the family mapping and identity filter.
    // Throws std::logic_error if any of the counting identities breaks.
    static const FeatureSchema& instance();
};

// Signal indices propagated per activated channel into the family pool.
std::vector<int> steric_family_signals();       // 10 signals
std::vector<int> hydrophobic_family_signals();  // 12 signals

}  // namespace fpmech
