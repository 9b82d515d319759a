#include <doctest.h>

#include <cmath>
#include <set>

#include "fpmech/chromophore.hpp"
#include "fpmech/errors.hpp"

#include "../support/fixtures.hpp"

using namespace fpmech;

namespace {

Residue tyr_at(const std::string& chain, int seq, const Vec3& c) {
    Residue r;
    r.chain_id = chain;
    r.seq_index = seq;
    r.aa3 = "TYR";
    r.atoms = {
        fixtures::atom("N", c.x - 1.2, c.y, c.z),    fixtures::atom("CA", c.x, c.y, c.z),
        fixtures::atom("C", c.x + 1.2, c.y, c.z),    fixtures::atom("O", c.x + 1.8, c.y - 1, c.z),
        fixtures::atom("CB", c.x, c.y + 1.5, c.z),   fixtures::atom("CG", c.x, c.y + 2.9, c.z),
        fixtures::atom("CD1", c.x + 1.2, c.y + 3.6, c.z),
        fixtures::atom("CD2", c.x - 1.2, c.y + 3.6, c.z),
        fixtures::atom("CE1", c.x + 1.2, c.y + 5.0, c.z),
        fixtures::atom("CE2", c.x - 1.2, c.y + 5.0, c.z),
        fixtures::atom("CZ", c.x, c.y + 5.7, c.z),
        fixtures::atom("OH", c.x, c.y + 7.1, c.z),
    };
    return r;
}

Residue plain_at(const std::string& chain, int seq, const std::string& aa3, const Vec3& c) {
    return fixtures::make_residue(chain, seq, aa3, c);
}

// chain: ...SER TYR GLY... at `where`, with residue positions spaced by 3 A
Structure two_triad_structure() {
    Structure s;
    s.id = "triads";
    // a distant triad far from the centroid
    s.residues.push_back(plain_at("A", 1, "SER", {30, 0, 0}));
    s.residues.push_back(tyr_at("A", 2, {33, 0, 0}));
    s.residues.push_back(plain_at("A", 3, "GLY", {36, 0, 0}));
    // bulk mass pulls the centroid near the origin
    for (int i = 0; i < 20; ++i) {
        s.residues.push_back(plain_at("A", 10 + i, "ALA", {std::cos(i * 0.6) * 4.0,
                                                           std::sin(i * 0.6) * 4.0, i * 0.3}));
    }
    // the buried triad
    s.residues.push_back(plain_at("A", 40, "SER", {-3, 0, 0}));
    s.residues.push_back(tyr_at("A", 41, {0, 0, 0}));
    s.residues.push_back(plain_at("A", 42, "GLY", {3, 0, 0}));
    return s;
}

}  // namespace

TEST_CASE("hetero CRO residue wins outright") {
    Structure s = two_triad_structure();
    s.residues.push_back(fixtures::make_cro_residue("B", 66));
    const CroAnchor a = register_chromophore(s);
    CHECK(a.state == MaturationState::native_cro);
    REQUIRE(a.cro_residues.size() == 1);
    CHECK(s.residues[a.cro_residues[0]].aa3 == "CRO");
}

TEST_CASE("most buried triad is selected") {
    const Structure s = two_triad_structure();
    const CroAnchor a = register_chromophore(s);
    CHECK(a.state == MaturationState::registered_triad);
    REQUIRE(a.cro_residues.size() == 3);
    CHECK(s.residues[a.cro_residues[0]].seq_index == 40);
    CHECK(s.residues[a.cro_residues[1]].aa3 == "TYR");
    CHECK(s.residues[a.cro_residues[2]].aa3 == "GLY");
}

TEST_CASE("a chain gap breaks triad contiguity") {
    Structure s;
    s.id = "gap";
    s.residues.push_back(plain_at("A", 10, "SER", {-3, 0, 0}));
    s.residues.push_back(tyr_at("A", 25, {0, 0, 0}));  // numbering jumps
    s.residues.push_back(plain_at("A", 26, "GLY", {3, 0, 0}));
    CHECK_THROWS_AS(register_chromophore(s), NoChromophore);
}

TEST_CASE("poly-alanine chain has no chromophore") {
    Structure s;
    s.id = "polyA";
    for (int i = 0; i < 8; ++i) {
        s.residues.push_back(plain_at("A", i + 1, "ALA", {i * 3.0, 0, 0}));
    }
    CHECK_THROWS_AS(register_chromophore(s), NoChromophore);
}

TEST_CASE("phenolate centre is the ring centroid") {
    Structure s;
    s.id = "t";
    s.residues.push_back(plain_at("A", 1, "SER", {-3, 0, 0}));
    s.residues.push_back(tyr_at("A", 2, {0, 0, 0}));
    s.residues.push_back(plain_at("A", 3, "GLY", {3, 0, 0}));
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);

    // hand mean over the 7 ring atoms of tyr_at(..., {0,0,0})
    const double ex = (0 + 1.2 - 1.2 + 1.2 - 1.2 + 0 + 0) / 7.0;
    const double ey = (2.9 + 3.6 + 3.6 + 5.0 + 5.0 + 5.7 + 7.1) / 7.0;
    CHECK(std::abs(a.region_centres[0].x - ex) < 1e-9);
    CHECK(std::abs(a.region_centres[0].y - ey) < 1e-9);
    CHECK(std::abs(a.region_centres[0].z - 0.0) < 1e-9);

    // bridge = mean of Tyr CA and CB
    CHECK(std::abs(a.region_centres[1].x - 0.0) < 1e-9);
    CHECK(std::abs(a.region_centres[1].y - 0.75) < 1e-9);
}

TEST_CASE("CRO regions give three distinct centres and disjoint atom sets") {
    Structure s;
    s.id = "cro";
    s.residues.push_back(fixtures::make_cro_residue());
    s.residues.push_back(plain_at("A", 100, "LEU", {0, 6, 0}));
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);

    for (int i = 0; i < kNumRegions; ++i) {
        CHECK_FALSE(a.region_fallback[i]);
        for (int j = i + 1; j < kNumRegions; ++j) {
            CHECK(distance(a.region_centres[i], a.region_centres[j]) > 1.0);
        }
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& region : a.region_atoms) {
        for (const auto& key : region) {
            CHECK(seen.insert(key).second);  // no atom claimed twice
        }
    }
    // cro_centre is the mean over the region-supporting atoms
    Vec3 sum;
    size_t n = 0;
    for (const auto& region : a.region_atoms) {
        for (const auto& [ri, ai] : region) {
            sum += s.residues[ri].atoms[ai].position;
            ++n;
        }
    }
    CHECK(distance(a.cro_centre, sum / double(n)) < 1e-12);
}

TEST_CASE("missing region atoms degrade to flagged centroid") {
    Structure s;
    s.id = "bare";
    Residue cro;
    cro.chain_id = "A";
    cro.seq_index = 66;
    cro.aa3 = "CRO";
    cro.is_hetero = true;
    cro.atoms = {fixtures::atom("C1", 0, 0, 0), fixtures::atom("N2", 1, 0, 0)};
    s.residues.push_back(cro);
    s.residues.push_back(plain_at("A", 1, "ALA", {4, 0, 0}));
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);
    CHECK(a.region_fallback[0]);        // no phenolate atoms at all
    CHECK_FALSE(a.region_fallback[2]);  // imidazolinone found C1, N2
}

TEST_CASE("clamp contact matches exp(-1) for a residue 3 A out") {
    Structure s;
    s.id = "clamp";
    s.residues.push_back(fixtures::make_cro_residue());
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);

    // single residue whose centre sits exactly 3 A from the phenolate centre,
    // placed along +x so it stays out of the other regions' 6 A shells
    const Vec3 pc = a.region_centres[0];
    Residue probe;
    probe.chain_id = "A";
    probe.seq_index = 7;
    probe.aa3 = "ALA";
    probe.atoms = {fixtures::atom("CA", pc.x + 3.0, pc.y, pc.z)};
    REQUIRE(distance(probe.atoms[0].position, a.region_centres[1]) > 6.0);
    REQUIRE(distance(probe.atoms[0].position, a.region_centres[2]) > 6.0);
    s.residues.push_back(probe);

    const ClampDescriptors c = clamp_descriptors(s, a);
    CHECK(c.values[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(c.values[1] == doctest::Approx(0.0));
    CHECK(c.values[2] == doctest::Approx(0.0));
    CHECK(c.values[6] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));  // asymmetry
    CHECK(c.values[3] > 0.0);       // mindist to phenolate is real
    CHECK(c.values[4] < 999.0);     // bridge sees the probe at some distance
}

TEST_CASE("empty neighbourhood gives zero contacts and sentinel mindists") {
    Structure s;
    s.id = "lonely";
    s.residues.push_back(fixtures::make_cro_residue());
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);
    const ClampDescriptors c = clamp_descriptors(s, a);
    for (int i = 0; i < 3; ++i) CHECK(c.values[i] == 0.0);
    for (int i = 3; i < 6; ++i) CHECK(c.values[i] == 999.0);
    CHECK(c.values[6] == 0.0);
}

TEST_CASE("clamps are rigid-body invariant") {
    fpmech::Rng rng(99);
    Structure s = fixtures::random_cro_structure(13, 10);
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);
    const ClampDescriptors base = clamp_descriptors(s, a);

    for (int trial = 0; trial < 10; ++trial) {
        const auto rot = fixtures::random_rotation(rng);
        const Vec3 shift{rng.next_gauss() * 20, rng.next_gauss() * 20, rng.next_gauss() * 20};
        Structure moved = fixtures::transformed(s, rot, shift);
        CroAnchor ma = register_chromophore(moved);
        decompose_regions(moved, ma);
        const ClampDescriptors got = clamp_descriptors(moved, ma);
        for (int i = 0; i < 7; ++i) {
            CHECK(std::abs(got.values[i] - base.values[i]) < 1e-9);
        }
    }
}

TEST_CASE("mirror-symmetric neighbours cancel the asymmetry term") {
    Structure s;
    s.id = "sym";
    s.residues.push_back(fixtures::make_cro_residue());
    CroAnchor a = register_chromophore(s);
    decompose_regions(s, a);

    const Vec3 p0 = a.region_centres[0];
    const Vec3 p2 = a.region_centres[2];
    Residue r1, r2;
    r1.chain_id = r2.chain_id = "A";
    r1.seq_index = 1;
    r2.seq_index = 2;
    r1.aa3 = r2.aa3 = "VAL";
    r1.atoms = {fixtures::atom("CA", p0.x, p0.y + 2.0, p0.z)};
    r2.atoms = {fixtures::atom("CA", p2.x, p2.y + 2.0, p2.z)};
    s.residues.push_back(r1);
    s.residues.push_back(r2);
    CroAnchor a2 = register_chromophore(s);
    decompose_regions(s, a2);
    const ClampDescriptors c = clamp_descriptors(s, a2);
    CHECK(std::abs(c.values[6]) < 1e-9);
}
