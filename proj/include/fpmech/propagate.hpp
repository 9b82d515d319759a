#pragma once

#include <string>
#include <vector>

#include "fpmech/chromophore.hpp"
#include "fpmech/mechanism_graph.hpp"
#include "fpmech/signals.hpp"

namespace fpmech {

inline constexpr int kNumFeatures = 121;  // 19 signals x 2 channels x 3 regions + 7 clamps
inline constexpr int kPropagationSteps = 2;

struct PropagateConfig {
    GraphConfig graph;
    double beta_threshold = 0.05;
    double epsilon = 1e-8;
};

struct FeatureVector {
    std::string protein_id;
    std::array<double, kNumFeatures> values{};
    std::string schema_hash;
    // empty 12 A neighbourhood: enrichment block zeroed, clamps still real
    bool degenerate_neighbourhood = false;
    bool region_fallback = false;  // any region centre degraded to a centroid
};

using NodeStates = std::vector<SeedVector>;

// Two synchronous update steps of
//   h' = (h + sum w * alpha_u * h_v) / (1 + 0.1 * sum w * alpha_u)
// where alpha_u is the receiving node's chromophore attenuation.
NodeStates propagate_channel(const MechanismGraph& g, const SeedTable& table, ChannelId ch);

// beta-weighted mean over nodes with beta > threshold; empty support reads 0.
SeedVector region_readout(const NodeStates& states, const MechanismGraph& g, CroRegion region,
                          double beta_threshold, double epsilon);

// Full 121-vector: the enrichment block ordered channel-major (steric first),
// then signal, then region (phenolate, bridge, imidazolinone); clamps last.
FeatureVector featurize(const Structure& s, const CroAnchor& anchor, const SeedTable& table,
                        const PropagateConfig& cfg = {});

}  // namespace fpmech
