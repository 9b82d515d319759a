#pragma once

// Synthetic structures, PDB text rendering and planted-signal datasets shared
// by the unit and acceptance suites.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fpmech/eval.hpp"
#include "fpmech/pdb.hpp"
#include "fpmech/signals.hpp"
#include "fpmech/util.hpp"

namespace fixtures {

using fpmech::AtomRecord;
using fpmech::Residue;
using fpmech::Structure;
using fpmech::Vec3;

inline AtomRecord atom(const std::string& name, double x, double y, double z) {
    AtomRecord a;
    a.name = name;
    a.element = std::string(1, name[0] == '1' || name[0] == '2' ? name[1] : name[0]);
    a.position = {x, y, z};
    return a;
}

// Idealized mature chromophore: imidazolinone pentagon around the origin,
// methine bridge along +x, phenol hexagon further out. Geometry is plausible
// rather than crystallographic; only atom names and rough distances matter.
inline Residue make_cro_residue(const std::string& chain = "A", int seq = 66) {
    Residue r;
    r.chain_id = chain;
    r.seq_index = seq;
    r.aa3 = "CRO";
    r.is_hetero = true;

    const double ring5 = 1.17;
    auto on_pentagon = [&](double deg) {
        const double rad = deg * 3.141592653589793 / 180.0;
        return std::pair(ring5 * std::cos(rad), ring5 * std::sin(rad));
    };
    for (const auto& [name, deg] : std::vector<std::pair<std::string, double>>{
             {"CA2", 0}, {"N2", 72}, {"C1", 144}, {"N3", 216}, {"C2", 288}}) {
        const auto [x, y] = on_pentagon(deg);
        r.atoms.push_back(atom(name, x, y, 0.0));
    }
    r.atoms.push_back(atom("O2", 1.9, -1.9, 0.0));  // carbonyl off C2
    r.atoms.push_back(atom("CB2", 2.57, 0.0, 0.0));
    r.atoms.push_back(atom("CG2", 3.97, 0.0, 0.0));
    const double hex = 1.39;
    const Vec3 ring_centre{3.97 + hex, 0.0, 0.0};
    for (const auto& [name, deg] : std::vector<std::pair<std::string, double>>{
             {"CD1", 120}, {"CD2", 240}, {"CE1", 60}, {"CE2", 300}, {"CZ", 0}}) {
        const double rad = deg * 3.141592653589793 / 180.0;
        r.atoms.push_back(
            atom(name, ring_centre.x + hex * std::cos(rad), ring_centre.y + hex * std::sin(rad), 0.0));
    }
    r.atoms.push_back(atom("OH", ring_centre.x + hex + 1.36, 0.0, 0.0));
    // stubs of the fused backbone
    r.atoms.push_back(atom("N1", -1.5, 1.2, 0.5));
    r.atoms.push_back(atom("CA1", -2.2, 0.1, 0.8));
    r.atoms.push_back(atom("CA3", -1.2, -1.8, -0.4));
    r.atoms.push_back(atom("C3", -2.5, -2.2, -0.2));
    r.atoms.push_back(atom("O3", -3.3, -1.5, 0.3));
    return r;
}

inline const std::array<std::string, 20>& standard_aa3() {
    static const std::array<std::string, 20> codes = {
        "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
        "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};
    return codes;
}

// Small residue with a backbone-like four-atom cluster near `centre`.
inline Residue make_residue(const std::string& chain, int seq, const std::string& aa3,
                            const Vec3& centre, fpmech::Rng* rng = nullptr) {
    Residue r;
    r.chain_id = chain;
    r.seq_index = seq;
    r.aa3 = aa3;
    auto jitter = [&](double scale) {
        return rng ? (rng->next_unit() - 0.5) * scale : 0.0;
    };
    r.atoms.push_back(atom("N", centre.x - 0.7 + jitter(0.4), centre.y + jitter(0.4), centre.z));
    r.atoms.push_back(atom("CA", centre.x + jitter(0.4), centre.y + 0.6 + jitter(0.4), centre.z));
    r.atoms.push_back(atom("C", centre.x + 0.7 + jitter(0.4), centre.y + jitter(0.4), centre.z));
    r.atoms.push_back(atom("O", centre.x + 0.9, centre.y - 0.9 + jitter(0.4), centre.z + 0.3));
    return r;
}

// CRO anchor plus n_res residues scattered in a shell around it.
inline Structure random_cro_structure(uint64_t seed, int n_res, double r_min = 3.5,
                                      double r_max = 11.0) {
    fpmech::Rng rng(seed);
    Structure s;
    s.id = "synthetic_" + std::to_string(seed);
    s.residues.push_back(make_cro_residue());
    for (int i = 0; i < n_res; ++i) {
        // direction by normalized gaussian triple, radius uniform in shell
        double gx = rng.next_gauss(), gy = rng.next_gauss(), gz = rng.next_gauss();
        const double norm = std::sqrt(gx * gx + gy * gy + gz * gz) + 1e-12;
        const double rad = r_min + rng.next_unit() * (r_max - r_min);
        const Vec3 centre{2.5 + gx / norm * rad, gy / norm * rad, gz / norm * rad};
        const std::string aa = standard_aa3()[rng.next_below(20)];
        s.residues.push_back(make_residue("A", 100 + i, aa, centre, &rng));
    }
    return s;
}

// 3x3 rotation from a random unit quaternion.
struct Rotation {
    std::array<std::array<double, 3>, 3> m;
    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

inline Rotation random_rotation(fpmech::Rng& rng) {
    double q[4];
    double n = 0.0;
    for (double& qi : q) {
        qi = rng.next_gauss();
        n += qi * qi;
    }
    n = std::sqrt(n);
    for (double& qi : q) qi /= n;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Rotation r;
    r.m = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    return r;
}

inline Structure transformed(const Structure& s, const Rotation& rot, const Vec3& shift) {
    Structure out = s;
    for (auto& res : out.residues) {
        for (auto& a : res.atoms) a.position = rot.apply(a.position) + shift;
    }
    return out;
}

inline Structure permuted(const Structure& s, fpmech::Rng& rng) {
    Structure out = s;
    rng.shuffle(out.residues);
    return out;
}

// PDB v3.3 fixed-column rendering of a Structure.
inline std::string to_pdb_text(const Structure& s) {
    std::string out;
    int serial = 1;
    char buf[96];
    for (const auto& r : s.residues) {
        for (const auto& a : r.atoms) {
            char name[5];
            if (a.name.size() >= 4) {
                std::snprintf(name, sizeof(name), "%.4s", a.name.c_str());
            } else {
                std::snprintf(name, sizeof(name), " %-3s", a.name.c_str());
            }
            std::snprintf(buf, sizeof(buf),
                          "%-6s%5d %s %-3s %1s%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n",
                          r.is_hetero ? "HETATM" : "ATOM", serial++, name, r.aa3.c_str(),
                          r.chain_id.c_str(), r.seq_index, r.icode == ' ' ? ' ' : r.icode,
                          a.position.x, a.position.y, a.position.z, 1.0, 0.0, a.element.c_str());
            out += buf;
        }
    }
    out += "END\n";
    return out;
}

// Planted-signal synthetic dataset: random candidate features, y linear in
// three non-identity enrichment columns plus noise with sd = signal sd / snr,
// emissions cycling over the three bands.
struct Synthetic {
    std::vector<fpmech::ProteinRecord> records;
    fpmech::FeatureTable features;
    std::vector<std::string> informative;
};

inline Synthetic make_planted_dataset(int n, uint64_t seed, double snr = 2.0) {
    const auto& sc = fpmech::FeatureSchema::instance();
    Synthetic out;
    out.features = fpmech::FeatureTable::with_schema_columns();
    out.informative = {"ch_steric__bulky__phenolate", "ch_hydrophobic__hydrophobic__bridge",
                       "ch_steric__charge__imidazolinone"};
    std::vector<int> inf_idx;
    for (const auto& name : out.informative) inf_idx.push_back(out.features.column_index(name));

    fpmech::Rng rng(seed);
    std::vector<double> raw(n);
    // bands cycle row-wise; emissions vary inside each band so the
    // emission-only baseline has a non-constant column to fit
    const double em_base[3] = {515.0, 590.0, 640.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(sc.candidate_columns.size());
        for (auto& v : row) v = rng.next_gauss();
        double signal = 0.0;
        for (int c : inf_idx) signal += row[c];
        signal /= std::sqrt(3.0);
        raw[i] = signal + rng.next_gauss() / snr;

        fpmech::ProteinRecord rec;
        rec.id = "p" + std::to_string(i);
        rec.emission_nm = em_base[i % 3] + double((i / 3) % 7);
        // sequences only matter for split tests; make them long and distinct
        rec.sequence = "ACDEFGHIKLMNPQRSTVWY";
        for (int j = 0; j < 10; ++j) rec.sequence += standard_aa3()[rng.next_below(20)][0];
        rec.structure_path = rec.id + ".pdb";
        out.records.push_back(std::move(rec));
        out.features.ids.push_back("p" + std::to_string(i));
        out.features.rows.push_back(std::move(row));
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    for (int i = 0; i < n; ++i) {
        out.records[i].qy = (*hi > *lo) ? (raw[i] - *lo) / (*hi - *lo) : 0.5;
    }
    return out;
}

}  // namespace fixtures
