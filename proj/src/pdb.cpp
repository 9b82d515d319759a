#include "fpmech/pdb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "fpmech/errors.hpp"

namespace fpmech {

Vec3 Residue::centre() const {
    Vec3 c;
    for (const auto& a : atoms) c += a.position;
    return c / static_cast<double>(atoms.size());
}

namespace {

std::string strip(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string field(const std::string& line, size_t col1, size_t col2) {
    // 1-based inclusive PDB column range; short lines yield what is present
    if (line.size() < col1) return "";
    return line.substr(col1 - 1, std::min(col2, line.size()) - col1 + 1);
}

double coord_field(const std::string& line, size_t col1, size_t col2, const std::string& what) {
    const std::string raw = strip(field(line, col1, col2));
    if (raw.empty()) throw MalformedRecord("missing " + what + " in: " + line);
    try {
        size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size() || !std::isfinite(v)) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw MalformedRecord("unparseable " + what + " '" + raw + "' in: " + line);
    }
}

std::string element_from_name(const std::string& name) {
    // Fallback when columns 77-78 are absent: first alphabetic character of
    // the stripped name (handles leading digits like "1HB").
    for (char c : name) {
        if (std::isalpha(static_cast<unsigned char>(c))) return std::string(1, std::toupper(static_cast<unsigned char>(c)));
    }
    return "X";
}

}  // namespace

Structure parse_structure_text(std::string_view text, const std::string& id) {
    Structure s;
    s.id = id;

    // per (residue, atom name): best occupancy seen so far, for altloc picks
    std::map<std::pair<size_t, std::string>, double> best_occ;
    // group atoms by residue identity even when records are non-contiguous
    std::map<std::tuple<std::string, int, char, std::string>, size_t> residue_of;

    bool in_first_model = true;
    bool saw_model = false;
    size_t records = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string rec = field(line, 1, 6);
        if (rec.rfind("MODEL", 0) == 0) {
            if (saw_model) in_first_model = false;  // MODEL 2 and beyond
            saw_model = true;
            continue;
        }
        if (rec.rfind("ENDMDL", 0) == 0) {
            if (saw_model) in_first_model = false;
            continue;
        }
        if (!in_first_model) continue;
        const bool is_atom = rec == "ATOM  ";
        const bool is_het = rec == "HETATM";
        if (!is_atom && !is_het) continue;
        ++records;

        std::string resn = strip(field(line, 18, 20));
        std::transform(resn.begin(), resn.end(), resn.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (resn == "HOH") continue;  // solvent-dependent channels are inactive

        std::string chain = strip(field(line, 22, 22));
        if (chain.empty()) chain = "_";
        const std::string seq_raw = strip(field(line, 23, 26));
        int seq = 0;
        try {
            seq = std::stoi(seq_raw);
        } catch (const std::exception&) {
            throw MalformedRecord("unparseable residue number '" + seq_raw + "' in: " + line);
        }
        const std::string icode_f = field(line, 27, 27);
        const char icode = icode_f.empty() ? ' ' : icode_f[0];

        AtomRecord atom;
        atom.name = strip(field(line, 13, 16));
        if (atom.name.empty()) throw MalformedRecord("empty atom name in: " + line);
        atom.position.x = coord_field(line, 31, 38, "x");
        atom.position.y = coord_field(line, 39, 46, "y");
        atom.position.z = coord_field(line, 47, 54, "z");
        atom.element = strip(field(line, 77, 78));
        if (atom.element.empty()) atom.element = element_from_name(atom.name);

        double occ = 1.0;
        const std::string occ_raw = strip(field(line, 55, 60));
        if (!occ_raw.empty()) {
            try {
                occ = std::stod(occ_raw);
            } catch (const std::exception&) {
                occ = 1.0;
            }
        }

        const auto key = std::make_tuple(chain, seq, icode, resn);
        auto found = residue_of.find(key);
        if (found == residue_of.end()) {
            // new (chain, resSeq, icode, resName) group, kept in file order
            Residue r;
            r.chain_id = chain;
            r.seq_index = seq;
            r.icode = icode;
            r.aa3 = resn;
            r.is_hetero = is_het;
            s.residues.push_back(std::move(r));
            found = residue_of.emplace(key, s.residues.size() - 1).first;
        }
        const size_t res_idx = found->second;
        Residue& res = s.residues[res_idx];

        const char altloc = line.size() >= 17 ? line[16] : ' ';
        auto existing = std::find_if(res.atoms.begin(), res.atoms.end(),
                                     [&](const AtomRecord& a) { return a.name == atom.name; });
        if (existing == res.atoms.end()) {
            res.atoms.push_back(std::move(atom));
            best_occ[{res_idx, res.atoms.back().name}] = occ;
        } else if (altloc != ' ') {
            auto& best = best_occ[{res_idx, atom.name}];
            if (occ > best) {
                *existing = std::move(atom);
                best = occ;
            }
        }
    }

    if (records == 0) throw EmptyStructure(id + ": no ATOM or HETATM records");
    if (s.residues.empty()) throw EmptyStructure(id + ": no residues after filtering");
    return s;
}

Structure parse_structure(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmptyStructure("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string id = path;
    const size_t slash = id.find_last_of("/\\");
    if (slash != std::string::npos) id = id.substr(slash + 1);
    const size_t dot = id.find_last_of('.');
    if (dot != std::string::npos && dot > 0) id = id.substr(0, dot);
    return parse_structure_text(buf.str(), id);
}

double residue_min_distance(const Residue& u, const Residue& v) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : u.atoms) {
        for (const auto& b : v.atoms) {
            best = std::min(best, distance(a.position, b.position));
        }
    }
    return best;
}

}  // namespace fpmech
