#pragma once

#include <array>
#include <string>
#include <vector>

#include "fpmech/chromophore.hpp"
#include "fpmech/pdb.hpp"

namespace fpmech {

enum class ChannelId { steric, hydrophobic, spatial, hbond, electrostatic, aromatic };

// Only the two geometry-robust contact channels propagate; the remaining
// annotations are reserved identifiers with no edge construction.
inline constexpr std::array<ChannelId, 2> kActivatedChannels = {ChannelId::steric,
                                                                ChannelId::hydrophobic};
inline constexpr bool is_activated(ChannelId ch) {
    return ch == ChannelId::steric || ch == ChannelId::hydrophobic;
}
const char* channel_name(ChannelId ch);

struct GraphConfig {
    double locality_radius = 12.0;  // strict < on the residue-centre distance
    double edge_cutoff = 8.0;       // strict < on the min-atom distance
};

struct MechanismGraph {
    struct Edge {
        int u = 0;
        int v = 0;
        double steric_w = 0.0;       // exp(-d / 3.0)
        double hydrophobic_w = 0.0;  // 1 / (1 + d)
    };

    std::vector<int> node_residues;  // indices into Structure::residues, sorted by residue key
    std::vector<std::string> node_aa3;
    std::vector<Vec3> node_centres;
    std::vector<double> alpha;                              // exp(-|c_u - c_CRO| / 5.0)
    std::array<std::vector<double>, kNumRegions> beta;      // exp(-|c_u - centre_r| / 3.0)
    std::vector<Edge> edges;                                // unordered pairs, u < v
    std::vector<std::vector<std::pair<int, double>>> steric_adj;
    std::vector<std::vector<std::pair<int, double>>> hydrophobic_adj;

    double edge_weight(ChannelId ch, const Edge& e) const {
        return ch == ChannelId::steric ? e.steric_w : e.hydrophobic_w;
    }
    const std::vector<std::vector<std::pair<int, double>>>& adjacency(ChannelId ch) const {
        return ch == ChannelId::steric ? steric_adj : hydrophobic_adj;
    }
};

// Chromophore-local graph over non-CRO residues within the locality radius.
// Throws EmptyLocalNeighbourhood when no residue qualifies.
MechanismGraph build_graph(const Structure& s, const CroAnchor& anchor, const GraphConfig& cfg = {});

// Per-channel edge list as delimited text (u_id, v_id, weight) for debugging.
std::string dump_edges(const Structure& s, const MechanismGraph& g, ChannelId ch);

}  // namespace fpmech
