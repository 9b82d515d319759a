#pragma once

#include <array>
#include <string>
#include <vector>

#include "fpmech/geometry.hpp"
#include "fpmech/pdb.hpp"

namespace fpmech {

enum class MaturationState { native_cro, registered_triad };

enum class CroRegion : int { phenolate = 0, bridge = 1, imidazolinone = 2 };
inline constexpr int kNumRegions = 3;
inline constexpr std::array<const char*, kNumRegions> kRegionNames = {"phenolate", "bridge",
                                                                      "imidazolinone"};

struct ChromophoreConfig {
    // Recognised mature-chromophore hetero codes; extend for exotic variants.
    std::vector<std::string> hetero_codes = {"CRO", "CR2", "CR8", "CRQ", "CSY"};
};

struct CroAnchor {
    MaturationState state = MaturationState::native_cro;
    std::vector<int> cro_residues;  // indices into Structure::residues

    // filled by decompose_regions
    std::array<Vec3, kNumRegions> region_centres{};
    Vec3 cro_centre{};
    // (residue index, atom index) pairs backing each centre; pairwise disjoint
    std::array<std::vector<std::pair<int, int>>, kNumRegions> region_atoms{};
    std::array<bool, kNumRegions> region_fallback{false, false, false};
    bool decomposed = false;
};

struct ClampDescriptors {
    // order: phenolate/bridge/imidazolinone contact, then mindist, then asymmetry
    std::array<double, 7> values{};
};

inline constexpr std::array<const char*, 7> kClampNames = {
    "clamp_phenolate_contact",  "clamp_bridge_contact",  "clamp_imidazolinone_contact",
    "clamp_phenolate_mindist",  "clamp_bridge_mindist",  "clamp_imidazolinone_mindist",
    "clamp_asymmetry"};

// Anchors the mature chromophore: a recognised hetero residue wins outright;
// otherwise the most buried contiguous X-Tyr-Gly triad is registered.
CroAnchor register_chromophore(const Structure& s, const ChromophoreConfig& cfg = {});

// Fills the three region centres and the CRO centre (mean over the atoms
// supporting the regions). Region atom sets are disjoint by construction.
void decompose_regions(const Structure& s, CroAnchor& anchor);

ClampDescriptors clamp_descriptors(const Structure& s, const CroAnchor& anchor);

}  // namespace fpmech
