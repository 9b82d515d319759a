#include "fpmech/mechanism_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

const char* channel_name(ChannelId ch) {
    switch (ch) {
        case ChannelId::steric: return "steric";
        case ChannelId::hydrophobic: return "hydrophobic";
        case ChannelId::spatial: return "spatial";
        case ChannelId::hbond: return "hbond";
        case ChannelId::electrostatic: return "electrostatic";
        case ChannelId::aromatic: return "aromatic";
    }
    return "?";
}

MechanismGraph build_graph(const Structure& s, const CroAnchor& anchor, const GraphConfig& cfg) {
    MechanismGraph g;
    const std::set<int> cro_set(anchor.cro_residues.begin(), anchor.cro_residues.end());

    for (size_t i = 0; i < s.residues.size(); ++i) {
        if (cro_set.count(static_cast<int>(i))) continue;
        const Vec3 c = s.residues[i].centre();
        if (distance(c, anchor.cro_centre) < cfg.locality_radius) {
            g.node_residues.push_back(static_cast<int>(i));
        }
    }
    if (g.node_residues.empty()) {
        throw EmptyLocalNeighbourhood(s.id + ": no residue within " + fmt_double(cfg.locality_radius) +
                                      " A of the chromophore");
    }

    // Canonical node order: summation order is then independent of the input
    // residue order, so features are bit-stable under permutation.
    std::sort(g.node_residues.begin(), g.node_residues.end(), [&](int a, int b) {
        const Residue& ra = s.residues[a];
        const Residue& rb = s.residues[b];
        return std::tie(ra.chain_id, ra.seq_index, ra.icode, ra.aa3) <
               std::tie(rb.chain_id, rb.seq_index, rb.icode, rb.aa3);
    });

    const size_t n = g.node_residues.size();
    g.node_aa3.resize(n);
    g.node_centres.resize(n);
    g.alpha.resize(n);
    for (int r = 0; r < kNumRegions; ++r) g.beta[r].resize(n);
    for (size_t i = 0; i < n; ++i) {
        const Residue& res = s.residues[g.node_residues[i]];
        g.node_aa3[i] = res.aa3;
        g.node_centres[i] = res.centre();
        g.alpha[i] = std::exp(-distance(g.node_centres[i], anchor.cro_centre) / 5.0);
        for (int r = 0; r < kNumRegions; ++r) {
            g.beta[r][i] = std::exp(-distance(g.node_centres[i], anchor.region_centres[r]) / 3.0);
        }
    }

    g.steric_adj.resize(n);
    g.hydrophobic_adj.resize(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double d =
                residue_min_distance(s.residues[g.node_residues[i]], s.residues[g.node_residues[j]]);
            if (!(d < cfg.edge_cutoff)) continue;
            MechanismGraph::Edge e;
            e.u = static_cast<int>(i);
            e.v = static_cast<int>(j);
            e.steric_w = std::exp(-d / 3.0);
            e.hydrophobic_w = 1.0 / (1.0 + d);
            g.edges.push_back(e);
            g.steric_adj[i].emplace_back(e.v, e.steric_w);
            g.steric_adj[j].emplace_back(e.u, e.steric_w);
            g.hydrophobic_adj[i].emplace_back(e.v, e.hydrophobic_w);
            g.hydrophobic_adj[j].emplace_back(e.u, e.hydrophobic_w);
        }
    }
    return g;
}

std::string dump_edges(const Structure& s, const MechanismGraph& g, ChannelId ch) {
    if (!is_activated(ch)) {
        throw Error(std::string("channel ") + channel_name(ch) + " is reserved, not activated");
    }
    std::ostringstream out;
    out << "u_id,v_id,weight\n";
    auto label = [&](int node) {
        const Residue& r = s.residues[g.node_residues[node]];
        std::string lab = r.chain_id + ":" + std::to_string(r.seq_index);
        if (r.icode != ' ') lab += r.icode;
        return lab;
    };
    for (const auto& e : g.edges) {
        out << label(e.u) << "," << label(e.v) << "," << fmt_double(g.edge_weight(ch, e)) << "\n";
    }
    return out.str();
}

}  // namespace fpmech
