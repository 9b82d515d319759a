#include <doctest.h>

#include <cmath>

#include "fpmech/propagate.hpp"

#include "../support/dense_oracle.hpp"
#include "../support/fixtures.hpp"

using namespace fpmech;

namespace {

CroAnchor anchored(const Structure& s) {
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);
    return a;
}

// graph with hand-set nodes for the two-node update example
MechanismGraph two_node_graph(double w, double alpha_u, double alpha_v) {
    MechanismGraph g;
    g.node_residues = {0, 1};
    g.node_aa3 = {"U", "V"};
    g.node_centres = {{0, 0, 0}, {1, 0, 0}};
    g.alpha = {alpha_u, alpha_v};
    for (int r = 0; r < kNumRegions; ++r) g.beta[r] = {0.5, 0.5};
    MechanismGraph::Edge e;
    e.u = 0;
    e.v = 1;
    e.steric_w = w;
    e.hydrophobic_w = w;
    g.edges = {e};
    g.steric_adj = {{{1, w}}, {{0, w}}};
    g.hydrophobic_adj = g.steric_adj;
    return g;
}

// seed table stub: "U" row = all ones, "V" row = all zeros
SeedTable stub_table() {
    SeedTable t = SeedTable::builtin();
    return t;
}

}  // namespace

TEST_CASE("two-node hand iteration of the update") {
    MechanismGraph g = two_node_graph(1.0, 1.0, 1.0);
    // Seeds via a custom table are clumsy here; drive the update directly
    // through propagate_channel by aliasing U/V to codes with known rows is
    // fragile, so check the recurrence on one signal dimension by hand.
    // h_u0 = 1, h_v0 = 0, w = alpha = 1:
    //   step1: h = (1 + 0)/1.1 = 0.909090..., and symmetrically for v
    //   step2: h = (0.909090... * 2)/1.1 = 1.652892...
    const double step1 = (1.0 + 0.0) / 1.1;
    CHECK(step1 == doctest::Approx(0.90909090909).epsilon(1e-9));
    const double step2 = (step1 + step1) / 1.1;
    CHECK(step2 == doctest::Approx(1.65289256198).epsilon(1e-9));

    // now the real path: U gets seed 1, V gets seed 0 on the is_PHE signal
    g.node_aa3 = {"PHE", "GLY"};
    const NodeStates states = propagate_channel(g, stub_table(), ChannelId::steric);
    const int is_phe = 10;
    CHECK(states[0][is_phe] == doctest::Approx(step2).epsilon(1e-12));
    CHECK(states[1][is_phe] == doctest::Approx(step2).epsilon(1e-12));
}

TEST_CASE("isolated node keeps its seed") {
    MechanismGraph g;
    g.node_residues = {0};
    g.node_aa3 = {"TRP"};
    g.node_centres = {{0, 0, 0}};
    g.alpha = {0.7};
    for (int r = 0; r < kNumRegions; ++r) g.beta[r] = {0.4};
    g.steric_adj = {{}};
    g.hydrophobic_adj = {{}};
    const SeedTable t = SeedTable::builtin();
    const NodeStates states = propagate_channel(g, t, ChannelId::steric);
    const SeedVector want = t.seed_vector("TRP");
    for (int s = 0; s < kNumSignals; ++s) {
        CHECK(states[0][s] == doctest::Approx(want[s]).epsilon(1e-12));
    }
}

TEST_CASE("region readout of a single supporting node is nearly its state") {
    MechanismGraph g = two_node_graph(1.0, 1.0, 1.0);
    g.beta[0] = {0.5, 0.01};  // only node 0 supports phenolate at threshold 0.05
    NodeStates states(2);
    states[0].fill(2.0);
    states[1].fill(7.0);
    const SeedVector out = region_readout(states, g, CroRegion::phenolate, 0.05, 1e-8);
    for (int s = 0; s < kNumSignals; ++s) {
        CHECK(out[s] == doctest::Approx(0.5 * 2.0 / (0.5 + 1e-8)).epsilon(1e-12));
    }
}

TEST_CASE("readout over an empty support set is zero") {
    MechanismGraph g = two_node_graph(1.0, 1.0, 1.0);
    g.beta[1] = {0.01, 0.02};
    NodeStates states(2);
    states[0].fill(3.0);
    states[1].fill(4.0);
    const SeedVector out = region_readout(states, g, CroRegion::bridge, 0.05, 1e-8);
    for (int s = 0; s < kNumSignals; ++s) CHECK(out[s] == 0.0);
}

TEST_CASE("uniform states read back as the constant") {
    MechanismGraph g = two_node_graph(0.8, 0.9, 0.9);
    NodeStates states(2);
    states[0].fill(1.25);
    states[1].fill(1.25);
    const SeedVector out = region_readout(states, g, CroRegion::imidazolinone, 0.05, 1e-8);
    for (int s = 0; s < kNumSignals; ++s) {
        // off from the constant only by the epsilon regularisation
        CHECK(out[s] == doctest::Approx(1.25).epsilon(1e-6));
    }
}

TEST_CASE("raising the beta threshold never enlarges the support") {
    const Structure s = fixtures::random_cro_structure(3, 15);
    const CroAnchor a = anchored(s);
    const MechanismGraph g = build_graph(s, a);
    size_t prev = g.node_residues.size() + 1;
    for (double thr : {0.05, 0.2, 0.5, 0.9}) {
        size_t support = 0;
        for (double b : g.beta[0]) {
            if (b > thr) ++support;
        }
        CHECK(support <= prev);
        prev = support;
    }
}

TEST_CASE("featurize emits 121 values in schema order") {
    const Structure s = fixtures::random_cro_structure(11, 12);
    const FeatureVector fv = featurize(s, anchored(s), SeedTable::builtin());
    CHECK(fv.values.size() == 121);
    CHECK_FALSE(fv.degenerate_neighbourhood);
    for (double v : fv.values) CHECK(std::isfinite(v));
    CHECK(fv.schema_hash == FeatureSchema::instance().schema_hash());
}

TEST_CASE("empty neighbourhood flags the row and zeroes enrichment") {
    Structure s;
    s.id = "lonely";
    s.residues.push_back(fixtures::make_cro_residue());
    Residue far;
    far.chain_id = "A";
    far.seq_index = 1;
    far.aa3 = "ALA";
    far.atoms = {fixtures::atom("CA", 50, 50, 50)};
    s.residues.push_back(far);
    const FeatureVector fv = featurize(s, anchored(s), SeedTable::builtin());
    CHECK(fv.degenerate_neighbourhood);
    for (int i = 0; i < 114; ++i) CHECK(fv.values[i] == 0.0);
    for (int i = 117; i < 120; ++i) CHECK(fv.values[i] > 0.0);  // mindists still real
}

TEST_CASE("dense brute-force oracle agrees to 1e-9") {
    for (uint64_t seed : {11u, 22u, 33u, 44u}) {
        const Structure s = fixtures::random_cro_structure(seed, 6 + seed % 14);
        const CroAnchor a = anchored(s);
        const SeedTable t = SeedTable::builtin();
        const FeatureVector fv = featurize(s, a, t);
        const auto want = dense_oracle::featurize(s, a, t);
        for (int i = 0; i < kNumFeatures; ++i) {
            CHECK(std::abs(fv.values[i] - want[i]) < 1e-9);
        }
    }
}

TEST_CASE("identity-flag enrichment stays within [0,1]") {
    const auto& sc = FeatureSchema::instance();
    for (uint64_t seed : {3u, 5u, 8u}) {
        const Structure s = fixtures::random_cro_structure(seed, 16);
        const FeatureVector fv = featurize(s, anchored(s), SeedTable::builtin());
        for (size_t c = 0; c < sc.candidate_columns.size(); ++c) {
            const auto& name = sc.candidate_columns[c];
            if (name.find("__is_") == std::string::npos) continue;
            CHECK(fv.values[c] >= 0.0);
            CHECK(fv.values[c] <= 1.0);
        }
    }
}

TEST_CASE("residue input order cannot change features") {
    fpmech::Rng rng(17);
    const Structure s = fixtures::random_cro_structure(29, 14);
    const FeatureVector base = featurize(s, anchored(s), SeedTable::builtin());
    for (int trial = 0; trial < 5; ++trial) {
        const Structure p = fixtures::permuted(s, rng);
        const FeatureVector got = featurize(p, anchored(p), SeedTable::builtin());
        for (int i = 0; i < kNumFeatures; ++i) {
            CHECK(std::abs(got.values[i] - base.values[i]) < 1e-12);
        }
    }
}

TEST_CASE("rigid-body transforms leave the full vector unchanged") {
    fpmech::Rng rng(31);
    const Structure s = fixtures::random_cro_structure(41, 13);
    const FeatureVector base = featurize(s, anchored(s), SeedTable::builtin());
    for (int trial = 0; trial < 5; ++trial) {
        const auto rot = fixtures::random_rotation(rng);
        const Vec3 shift{rng.next_gauss() * 30, rng.next_gauss() * 30, rng.next_gauss() * 30};
        const Structure m = fixtures::transformed(s, rot, shift);
        const FeatureVector got = featurize(m, anchored(m), SeedTable::builtin());
        for (int i = 0; i < kNumFeatures; ++i) {
            CHECK(std::abs(got.values[i] - base.values[i]) < 1e-9);
        }
    }
}

TEST_CASE("aux seed values cannot reach the non-identity pool") {
    const auto& sc = FeatureSchema::instance();
    const Structure s = fixtures::random_cro_structure(77, 12);
    const CroAnchor a = anchored(s);

    SeedTable base = SeedTable::builtin();
    // rebuild a table with the non-indicator aux signals rescaled
    std::string text = base.serialize();
    std::string header_line = text.substr(0, text.find('\n'));
    std::string out = header_line + "\n";
    size_t pos = text.find('\n') + 1;
    while (pos < text.size()) {
        const size_t end = text.find('\n', pos);
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        auto fields = fpmech::split_csv_line(line);
        for (int sidx : {14, 15, 18}) {  // non-indicator aux signals
            fields[1 + sidx] = fpmech::fmt_double(fpmech::parse_double(fields[1 + sidx]) * 7.5 + 3.0);
        }
        out += fpmech::join(fields, ",") + "\n";
    }
    const SeedTable tweaked = SeedTable::parse(out);
    CHECK(tweaked.content_hash() != base.content_hash());

    const FeatureVector fv_base = featurize(s, a, base);
    const FeatureVector fv_tweaked = featurize(s, a, tweaked);
    for (const auto& name : sc.nonid_columns) {
        const size_t c = std::find(sc.candidate_columns.begin(), sc.candidate_columns.end(), name) -
                         sc.candidate_columns.begin();
        CHECK(fv_base.values[c] == fv_tweaked.values[c]);
    }
}
