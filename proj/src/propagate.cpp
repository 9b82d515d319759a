#include "fpmech/propagate.hpp"

#include <cmath>

#include "fpmech/errors.hpp"

namespace fpmech {

NodeStates propagate_channel(const MechanismGraph& g, const SeedTable& table, ChannelId ch) {
    if (!is_activated(ch)) {
        throw Error(std::string("channel ") + channel_name(ch) + " is reserved, not activated");
    }
    const size_t n = g.node_residues.size();
    const auto& adj = g.adjacency(ch);

    NodeStates states(n);
    for (size_t i = 0; i < n; ++i) states[i] = table.seed_vector(g.node_aa3[i]);

    NodeStates next(n);
    for (int step = 0; step < kPropagationSteps; ++step) {
        for (size_t u = 0; u < n; ++u) {
            SeedVector acc = states[u];
            double denom_sum = 0.0;
            for (const auto& [v, w] : adj[u]) {
                const double grab = w * g.alpha[u];
                denom_sum += grab;
                for (int s = 0; s < kNumSignals; ++s) acc[s] += grab * states[v][s];
            }
            const double denom = 1.0 + 0.1 * denom_sum;
            for (int s = 0; s < kNumSignals; ++s) next[u][s] = acc[s] / denom;
        }
        states.swap(next);
    }
    return states;
}

SeedVector region_readout(const NodeStates& states, const MechanismGraph& g, CroRegion region,
                          double beta_threshold, double epsilon) {
    const auto& beta = g.beta[static_cast<int>(region)];
    SeedVector num{};
    double den = 0.0;
    bool any = false;
    for (size_t u = 0; u < states.size(); ++u) {
        if (!(beta[u] > beta_threshold)) continue;
        any = true;
        den += beta[u];
        for (int s = 0; s < kNumSignals; ++s) num[s] += beta[u] * states[u][s];
    }
    SeedVector out{};
    if (!any) return out;
    for (int s = 0; s < kNumSignals; ++s) out[s] = num[s] / (den + epsilon);
    return out;
}

FeatureVector featurize(const Structure& s, const CroAnchor& anchor, const SeedTable& table,
                        const PropagateConfig& cfg) {
    FeatureVector fv;
    fv.protein_id = s.id;
    fv.schema_hash = FeatureSchema::instance().schema_hash();
    for (bool fb : anchor.region_fallback) fv.region_fallback |= fb;

    int col = 0;
    try {
        const MechanismGraph g = build_graph(s, anchor, cfg.graph);
        for (ChannelId ch : kActivatedChannels) {
            const NodeStates states = propagate_channel(g, table, ch);
            std::array<SeedVector, kNumRegions> readouts;
            for (int r = 0; r < kNumRegions; ++r) {
                readouts[r] = region_readout(states, g, static_cast<CroRegion>(r),
                                             cfg.beta_threshold, cfg.epsilon);
            }
            for (int sig = 0; sig < kNumSignals; ++sig) {
                for (int r = 0; r < kNumRegions; ++r) fv.values[col++] = readouts[r][sig];
            }
        }
    } catch (const EmptyLocalNeighbourhood&) {
        fv.degenerate_neighbourhood = true;
        col = kNumSignals * 2 * kNumRegions;  // enrichment block stays zero
    }

    const ClampDescriptors clamps = clamp_descriptors(s, anchor);
    for (double v : clamps.values) fv.values[col++] = v;
    return fv;
}

}  // namespace fpmech
