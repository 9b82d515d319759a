#include "fpmech/metadata.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

std::vector<ProteinRecord> parse_metadata_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw MissingColumn("metadata is empty");

    const auto header = split_csv_line(line);
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* need : {"id", "sequence", "emission_nm", "qy", "structure_path"}) {
        if (!col.count(need)) throw MissingColumn(std::string("metadata lacks column '") + need + "'");
    }

    std::vector<ProteinRecord> out;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        auto get = [&](const char* name) -> std::string {
            const size_t i = col.at(name);
            if (i >= f.size()) throw MissingColumn("row " + std::to_string(line_no) + " is short");
            return f[i];
        };
        ProteinRecord r;
        r.id = get("id");
        r.sequence = get("sequence");
        try {
            r.emission_nm = parse_double(get("emission_nm"));
            r.qy = parse_double(get("qy"));
        } catch (const std::exception& e) {
            throw MalformedRecord("row " + std::to_string(line_no) + ": " + e.what());
        }
        r.structure_path = get("structure_path");

        if (r.sequence.size() < 5) {
            throw SequenceTooShort(r.id + ": sequence length " + std::to_string(r.sequence.size()) + " < 5");
        }
        if (!(r.qy >= 0.0 && r.qy <= 1.0)) {
            throw InvalidQy(r.id + ": qy " + fmt_double(r.qy) + " outside [0,1]");
        }
        if (!(r.emission_nm > 0.0)) {
            throw MalformedRecord(r.id + ": emission_nm must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ProteinRecord> load_metadata(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingColumn("cannot open metadata file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_metadata_text(buf.str());
}

}  // namespace fpmech
