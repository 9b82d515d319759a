#include "fpmech/chromophore.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "fpmech/errors.hpp"

namespace fpmech {

namespace {

Vec3 structure_centroid(const Structure& s) {
    Vec3 c;
    size_t n = 0;
    for (const auto& r : s.residues) {
        for (const auto& a : r.atoms) {
            c += a.position;
            ++n;
        }
    }
    return c / static_cast<double>(n);
}

const std::set<std::string> kBackboneNames = {"N", "CA", "C", "O", "OXT"};

Vec3 side_chain_centroid(const Residue& r) {
    Vec3 c;
    size_t n = 0;
    for (const auto& a : r.atoms) {
        if (kBackboneNames.count(a.name)) continue;
        c += a.position;
        ++n;
    }
    if (n == 0) return r.centre();
    return c / static_cast<double>(n);
}

// Collect (residue idx, atom idx) for the wanted atom names, skipping atoms
// already claimed by an earlier region.
std::vector<std::pair<int, int>> pick_atoms(const Structure& s, const std::vector<int>& residues,
                                            const std::vector<std::string>& names,
                                            std::set<std::pair<int, int>>& claimed) {
    std::vector<std::pair<int, int>> out;
    for (int ri : residues) {
        const Residue& r = s.residues[ri];
        for (size_t ai = 0; ai < r.atoms.size(); ++ai) {
            if (std::find(names.begin(), names.end(), r.atoms[ai].name) == names.end()) continue;
            const std::pair<int, int> key{ri, static_cast<int>(ai)};
            if (claimed.count(key)) continue;
            claimed.insert(key);
            out.push_back(key);
        }
    }
    return out;
}

Vec3 atoms_centroid(const Structure& s, const std::vector<std::pair<int, int>>& atoms) {
    Vec3 c;
    for (const auto& [ri, ai] : atoms) c += s.residues[ri].atoms[ai].position;
    return c / static_cast<double>(atoms.size());
}

}  // namespace

CroAnchor register_chromophore(const Structure& s, const ChromophoreConfig& cfg) {
    CroAnchor anchor;

    // Native mature chromophore wins regardless of triads elsewhere. With
    // several candidates (e.g. dimers) the one nearest the structure centroid
    // is kept, mirroring the triad burial rule.
    std::vector<int> native;
    for (size_t i = 0; i < s.residues.size(); ++i) {
        const Residue& r = s.residues[i];
        if (r.is_hetero &&
            std::find(cfg.hetero_codes.begin(), cfg.hetero_codes.end(), r.aa3) != cfg.hetero_codes.end()) {
            native.push_back(static_cast<int>(i));
        }
    }
    if (!native.empty()) {
        const Vec3 global = structure_centroid(s);
        int best = native[0];
        double best_d = std::numeric_limits<double>::infinity();
        for (int i : native) {
            const double d = distance(s.residues[i].centre(), global);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        anchor.state = MaturationState::native_cro;
        anchor.cro_residues = {best};
        return anchor;
    }

    // Contiguous (any, TYR, GLY) triads, most buried Tyr side chain selected.
    // Contiguity = file-adjacent within one chain and author numbering
    // advancing by at most one, so chain gaps cannot fake a triad.
    const auto contiguous = [](const Residue& a, const Residue& b) {
        if (a.chain_id != b.chain_id) return false;
        const int step = b.seq_index - a.seq_index;
        return step == 1 || (step == 0 && a.icode != b.icode);
    };
    const Vec3 global = structure_centroid(s);
    int best_x = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 2 < s.residues.size(); ++i) {
        const Residue& x = s.residues[i];
        const Residue& tyr = s.residues[i + 1];
        const Residue& gly = s.residues[i + 2];
        if (tyr.aa3 != "TYR" || gly.aa3 != "GLY") continue;
        if (!contiguous(x, tyr) || !contiguous(tyr, gly)) continue;
        if (x.is_hetero || tyr.is_hetero || gly.is_hetero) continue;
        const double d = distance(side_chain_centroid(tyr), global);
        if (d < best_d) {
            best_d = d;
            best_x = static_cast<int>(i);
        }
    }
    if (best_x < 0) throw NoChromophore(s.id + ": no mature hetero chromophore and no X-Tyr-Gly triad");

    anchor.state = MaturationState::registered_triad;
    anchor.cro_residues = {best_x, best_x + 1, best_x + 2};
    return anchor;
}

void decompose_regions(const Structure& s, CroAnchor& anchor) {
    std::set<std::pair<int, int>> claimed;
    std::array<std::vector<std::pair<int, int>>, kNumRegions> atoms;

    if (anchor.state == MaturationState::native_cro) {
        const std::vector<int> cro = anchor.cro_residues;
        // PDB CRO naming: Tyr-derived atoms carry suffix 2. Claim order
        // phenolate, bridge, imidazolinone keeps the sets disjoint (CA2 is
        // shared between the bridge pair and the five-membered ring).
        atoms[0] = pick_atoms(s, cro, {"CG2", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"}, claimed);
        atoms[1] = pick_atoms(s, cro, {"CA2", "CB2"}, claimed);
        atoms[2] = pick_atoms(s, cro, {"C1", "N2", "CA2", "C2", "N3"}, claimed);
    } else {
        const int xi = anchor.cro_residues[0];
        const int ty = anchor.cro_residues[1];
        const int gl = anchor.cro_residues[2];
        atoms[0] = pick_atoms(s, {ty}, {"CG", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"}, claimed);
        atoms[1] = pick_atoms(s, {ty}, {"CA", "CB"}, claimed);
        atoms[2] = pick_atoms(s, {xi}, {"C", "O"}, claimed);
        auto gly_part = pick_atoms(s, {gl}, {"N", "CA", "C"}, claimed);
        atoms[2].insert(atoms[2].end(), gly_part.begin(), gly_part.end());
    }

    // Fallback for structures missing region atoms: centroid over all anchor
    // residue atoms, flagged so downstream records carry the degradation.
    std::vector<std::pair<int, int>> all_anchor_atoms;
    for (int ri : anchor.cro_residues) {
        for (size_t ai = 0; ai < s.residues[ri].atoms.size(); ++ai) {
            all_anchor_atoms.emplace_back(ri, static_cast<int>(ai));
        }
    }

    Vec3 support_sum;
    size_t support_n = 0;
    for (int r = 0; r < kNumRegions; ++r) {
        if (atoms[r].empty()) {
            anchor.region_fallback[r] = true;
            anchor.region_centres[r] = atoms_centroid(s, all_anchor_atoms);
        } else {
            anchor.region_fallback[r] = false;
            anchor.region_centres[r] = atoms_centroid(s, atoms[r]);
            for (const auto& [ri, ai] : atoms[r]) {
                support_sum += s.residues[ri].atoms[ai].position;
                ++support_n;
            }
        }
        anchor.region_atoms[r] = std::move(atoms[r]);
    }
    anchor.cro_centre = support_n > 0 ? support_sum / static_cast<double>(support_n)
                                      : atoms_centroid(s, all_anchor_atoms);
    anchor.decomposed = true;
}

ClampDescriptors clamp_descriptors(const Structure& s, const CroAnchor& anchor) {
    constexpr double kContactRadius = 6.0;
    constexpr double kDecay = 3.0;
    constexpr double kMindistSentinel = 999.0;

    ClampDescriptors out;
    std::array<double, kNumRegions> contact{};
    std::array<double, kNumRegions> mindist{};
    mindist.fill(kMindistSentinel);

    const std::set<int> cro_set(anchor.cro_residues.begin(), anchor.cro_residues.end());
    for (size_t i = 0; i < s.residues.size(); ++i) {
        if (cro_set.count(static_cast<int>(i))) continue;
        const Residue& u = s.residues[i];
        const Vec3 cu = u.centre();
        for (int r = 0; r < kNumRegions; ++r) {
            const double dc = distance(cu, anchor.region_centres[r]);
            if (dc < kContactRadius) contact[r] += std::exp(-dc / kDecay);
            for (const auto& [ri, ai] : anchor.region_atoms[r]) {
                const Vec3& rp = s.residues[ri].atoms[ai].position;
                for (const auto& a : u.atoms) {
                    mindist[r] = std::min(mindist[r], distance(a.position, rp));
                }
            }
        }
    }

    out.values[0] = contact[0];
    out.values[1] = contact[1];
    out.values[2] = contact[2];
    out.values[3] = mindist[0];
    out.values[4] = mindist[1];
    out.values[5] = mindist[2];
    out.values[6] = contact[0] - contact[2];
    return out;
}

}  // namespace fpmech
