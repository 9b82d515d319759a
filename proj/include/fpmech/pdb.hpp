#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fpmech/geometry.hpp"

namespace fpmech {

struct AtomRecord {
    std::string name;     // stripped, e.g. "CA", "OH"
    std::string element;  // from columns 77-78, or derived from the name
    Vec3 position;        // Angstrom
};

struct Residue {
    std::string chain_id;
    int seq_index = 0;  // author numbering
    char icode = ' ';   // insertion code, part of the residue identity
    std::string aa3;    // three-letter code, uppercase
    bool is_hetero = false;
    std::vector<AtomRecord> atoms;

    Vec3 centre() const;  // mean over atom positions
};

enum class StructureSource { experimental, predicted };

struct Structure {
    std::string id;
    std::vector<Residue> residues;  // file order within each chain
    StructureSource source = StructureSource::experimental;
};

// PDB v3.3 fixed-column ATOM/HETATM ingestion. First model only, highest
// occupancy altloc (ties keep the first encountered), waters (HOH) dropped.
Structure parse_structure(const std::string& path);
Structure parse_structure_text(std::string_view text, const std::string& id);

// Minimum over all atom pairs of the Euclidean distance.
double residue_min_distance(const Residue& u, const Residue& v);

}  // namespace fpmech
