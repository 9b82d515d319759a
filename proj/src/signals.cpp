#include "fpmech/signals.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fpmech/chromophore.hpp"
#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

namespace {

struct AaScales {
    const char* aa3;
    double sc_heavy;   // side-chain heavy atoms
    double chi;        // side-chain rotatable dihedrals
    double kd;         // Kyte-Doolittle hydropathy
    double volume;     // residue volume, A^3 (Zamyatnin)
    double charge;     // formal charge at neutral pH
    double donors;     // side-chain H-bond donor groups
    double acceptors;  // side-chain H-bond acceptor groups
    double aromatic;
    double polarity;   // Grantham polarity
};

constexpr AaScales kScales[20] = {
    //        heavy chi  kd    vol    q     don acc arom polarity
    {"ALA", 1, 0, 1.8, 88.6, 0.0, 0, 0, 0, 8.1},
    {"ARG", 7, 4, -4.5, 173.4, 1.0, 3, 0, 0, 10.5},
    {"ASN", 4, 2, -3.5, 114.1, 0.0, 1, 1, 0, 11.6},
    {"ASP", 4, 2, -3.5, 111.1, -1.0, 0, 2, 0, 13.0},
    {"CYS", 2, 1, 2.5, 108.5, 0.0, 1, 1, 0, 5.5},
    {"GLN", 5, 3, -3.5, 143.8, 0.0, 1, 1, 0, 10.5},
    {"GLU", 5, 3, -3.5, 138.4, -1.0, 0, 2, 0, 12.3},
    {"GLY", 0, 0, -0.4, 60.1, 0.0, 0, 0, 0, 9.0},
    {"HIS", 6, 2, -3.2, 153.2, 0.1, 1, 1, 1, 10.4},
    {"ILE", 4, 2, 4.5, 166.7, 0.0, 0, 0, 0, 5.2},
    {"LEU", 4, 2, 3.8, 166.7, 0.0, 0, 0, 0, 4.9},
    {"LYS", 5, 4, -3.9, 168.6, 1.0, 1, 0, 0, 11.3},
    {"MET", 4, 3, 1.9, 162.9, 0.0, 0, 1, 0, 5.7},
    {"PHE", 7, 2, 2.8, 189.9, 0.0, 0, 0, 1, 5.2},
    {"PRO", 3, 0, -1.6, 112.7, 0.0, 0, 0, 0, 8.0},
    {"SER", 2, 1, -0.8, 89.0, 0.0, 1, 1, 0, 9.2},
    {"THR", 3, 1, -0.7, 116.1, 0.0, 1, 1, 0, 8.6},
    {"TRP", 10, 2, -0.9, 227.8, 0.0, 1, 0, 1, 5.4},
    {"TYR", 8, 2, -1.3, 193.6, 0.0, 1, 1, 1, 6.2},
    {"VAL", 3, 1, 4.2, 140.0, 0.0, 0, 0, 0, 5.9},
};

SeedVector row_from_scales(const AaScales& a) {
    SeedVector v{};
    const std::string aa = a.aa3;
    v[0] = a.sc_heavy / 10.0;            // bulky
    v[1] = a.chi / 4.0;                  // flex_risk
    v[2] = a.chi;                        // rotatable_burden
    v[3] = a.kd / 4.5;                   // hydrophobic
    v[4] = a.volume / 227.8;             // bulky_contact
    v[5] = a.charge;                     // charge
    v[6] = a.donors;                     // hbond_donor
    v[7] = a.acceptors;                  // hbond_acceptor
    v[8] = a.aromatic;                   // aromatic
    v[9] = (4.0 + a.sc_heavy) / 14.0;    // total_contact_burden
    v[10] = aa == "PHE" ? 1.0 : 0.0;
    v[11] = aa == "TYR" ? 1.0 : 0.0;
    v[12] = aa == "HIS" ? 1.0 : 0.0;
    v[13] = aa == "ALA" ? 1.0 : 0.0;
    v[14] = a.polarity / 13.0;           // aux_polarity
    v[15] = a.volume / 100.0;            // aux_volume
    v[16] = aa == "GLY" ? 1.0 : 0.0;
    v[17] = aa == "PRO" ? 1.0 : 0.0;
    v[18] = a.donors - a.acceptors;      // aux_net_hbond
    return v;
}

bool is_identity_signal(int s) {
    const std::string name = kSignalNames[s];
    return name.rfind("is_", 0) == 0 || name.rfind("aux_is_", 0) == 0;
}

}  // namespace

SeedTable SeedTable::builtin() {
    SeedTable t;
    for (const auto& a : kScales) t.rows_[a.aa3] = row_from_scales(a);

    SeedVector fb{};
    for (int s = 0; s < kNumSignals; ++s) {
        if (is_identity_signal(s)) {
            fb[s] = 0.0;
            continue;
        }
        double sum = 0.0;
        for (const auto& [aa, row] : t.rows_) sum += row[s];
        fb[s] = sum / static_cast<double>(t.rows_.size());
    }
    t.fallback_ = fb;
    return t;
}

const SeedVector& SeedTable::seed_vector(std::string_view aa3) const {
    auto it = rows_.find(std::string(aa3));
    return it == rows_.end() ? fallback_ : it->second;
}

std::string SeedTable::serialize() const {
    std::ostringstream out;
    out << "aa3";
    for (const auto* n : kSignalNames) out << "," << n;
    out << "\n";
    for (const auto& [aa, row] : rows_) {
        out << aa;
        for (double v : row) out << "," << fmt_double(v);
        out << "\n";
    }
    out << "UNK";
    for (double v : fallback_) out << "," << fmt_double(v);
    out << "\n";
    return out.str();
}

SeedTable SeedTable::parse(const std::string& text) {
    SeedTable t;
    std::istringstream in(text);
    std::string line;
    do {
        if (!std::getline(in, line)) throw MissingColumn("seed table is empty");
    } while (line.empty() || line[0] == '#' || line == "\r");
    const auto header = split_csv_line(line);
    if (header.size() != kNumSignals + 1 || header[0] != "aa3") {
        throw MissingColumn("seed table header must be aa3 plus the 19 signal names");
    }
    for (int s = 0; s < kNumSignals; ++s) {
        if (header[s + 1] != kSignalNames[s]) {
            throw MissingColumn("seed table column " + std::to_string(s + 1) + " must be " +
                                kSignalNames[s]);
        }
    }
    bool have_fallback = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != kNumSignals + 1) throw MalformedRecord("seed table row is short: " + line);
        SeedVector row{};
        for (int s = 0; s < kNumSignals; ++s) row[s] = parse_double(f[s + 1]);
        if (f[0] == "UNK") {
            t.fallback_ = row;
            have_fallback = true;
        } else {
            t.rows_[f[0]] = row;
        }
    }
    if (t.rows_.size() != 20 || !have_fallback) {
        throw MalformedRecord("seed table must carry 20 standard rows plus the UNK fallback row");
    }
    return t;
}

SeedTable SeedTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingColumn("cannot open seed table " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void SeedTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    out << serialize();
}

std::string SeedTable::content_hash() const { return hex64(fnv1a64(serialize())); }

std::vector<int> steric_family_signals() {
    // bulky, flex_risk, rotatable_burden, charge, hbond_donor, hbond_acceptor,
    // aromatic, is_PHE, is_TYR, is_HIS
    return {0, 1, 2, 5, 6, 7, 8, 10, 11, 12};
}

std::vector<int> hydrophobic_family_signals() {
    // hydrophobic, bulky_contact, charge, hbond_donor, hbond_acceptor,
    // aromatic, is_PHE, is_TYR, is_HIS, flex_risk, total_contact_burden, is_ALA
    return {3, 4, 5, 6, 7, 8, 10, 11, 12, 1, 9, 13};
}

namespace {

FeatureSchema build_schema() {
    FeatureSchema sc;
    const std::array<const char*, 2> channels = {"steric", "hydrophobic"};

    auto col_name = [](const char* ch, int signal, int region) {
        return std::string("ch_") + ch + "__" + kSignalNames[signal] + "__" + kRegionNames[region];
    };

    for (const auto* ch : channels) {
        for (int s = 0; s < kNumSignals; ++s) {
            for (int r = 0; r < kNumRegions; ++r) {
                sc.candidate_columns.push_back(col_name(ch, s, r));
            }
        }
    }
    for (const auto* c : kClampNames) sc.candidate_columns.push_back(c);

    const std::array<std::vector<int>, 2> family = {steric_family_signals(),
                                                    hydrophobic_family_signals()};
    for (int c = 0; c < 2; ++c) {
        const std::set<int> fam(family[c].begin(), family[c].end());
        for (int s = 0; s < kNumSignals; ++s) {
            if (!fam.count(s)) continue;
            for (int r = 0; r < kNumRegions; ++r) {
                const std::string name = col_name(channels[c], s, r);
                sc.family_columns.push_back(name);
                if (is_identity_signal(s)) continue;
                sc.nonid_columns.push_back(name);
                sc.enrichment_nonid.push_back(name);
                (c == 0 ? sc.steric_nonid : sc.hydrophobic_nonid).push_back(name);
            }
        }
    }
    for (const auto* c : kClampNames) {
        sc.family_columns.push_back(c);
        sc.nonid_columns.push_back(c);
        sc.clamp_columns.push_back(c);
    }

    auto expect = [](size_t got, size_t want, const char* what) {
        if (got != want) {
            throw std::logic_error(std::string("feature schema broke: ") + what + " = " +
                                   std::to_string(got) + ", expected " + std::to_string(want));
        }
    };
    expect(sc.candidate_columns.size(), 121, "candidate columns");
    expect(sc.family_columns.size(), 73, "family columns");
    expect(sc.nonid_columns.size(), 52, "non-identity columns");
    expect(sc.enrichment_nonid.size(), 45, "non-identity enrichment columns");
    expect(sc.steric_nonid.size(), 21, "steric non-identity columns");
    expect(sc.hydrophobic_nonid.size(), 24, "hydrophobic non-identity columns");
    expect(sc.clamp_columns.size(), 7, "clamp columns");
    for (const auto& n : sc.nonid_columns) {
        if (n.find("is_") != std::string::npos) {
            throw std::logic_error("identity shortcut leaked into the non-identity pool: " + n);
        }
    }
    return sc;
}

}  // namespace

const FeatureSchema& FeatureSchema::instance() {
    static const FeatureSchema sc = build_schema();
    return sc;
}

std::string FeatureSchema::schema_hash() const {
    return hex64(fnv1a64(join(candidate_columns, ",") + "|" + join(nonid_columns, ",")));
}

}  // namespace fpmech
