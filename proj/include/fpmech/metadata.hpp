#pragma once

#include <string>
#include <vector>

namespace fpmech {

struct ProteinRecord {
    std::string id;
    std::string sequence;
    double emission_nm = 0.0;
    double qy = 0.0;  // measured quantum yield in [0,1]
    std::string structure_path;
};

// Comma-delimited UTF-8 with a header carrying at least
// id, sequence, emission_nm, qy, structure_path. Row order preserved.
std::vector<ProteinRecord> load_metadata(const std::string& path);
std::vector<ProteinRecord> parse_metadata_text(const std::string& text);

}  // namespace fpmech
