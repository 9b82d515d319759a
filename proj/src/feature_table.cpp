#include "fpmech/feature_table.hpp"

#include <fstream>
#include <sstream>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

int FeatureTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    throw MissingColumn("feature table lacks column " + name);
}

FeatureTable FeatureTable::with_schema_columns() {
    FeatureTable t;
    t.columns = FeatureSchema::instance().candidate_columns;
    return t;
}

std::string feature_table_to_csv(const FeatureTable& t) {
    std::ostringstream out;
    out << "id";
    for (const auto& c : t.columns) out << "," << c;
    out << "\n";
    for (size_t i = 0; i < t.rows.size(); ++i) {
        out << t.ids[i];
        for (double v : t.rows[i]) out << "," << fmt_double(v);
        out << "\n";
    }
    return out.str();
}

FeatureTable feature_table_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw MissingFeatureTable("feature table is empty");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "id") throw MissingColumn("feature table must start with an id column");

    FeatureTable t;
    t.columns.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw MalformedRecord("feature row width mismatch: " + line);
        t.ids.push_back(f[0]);
        std::vector<double> row(t.columns.size());
        for (size_t c = 0; c < t.columns.size(); ++c) row[c] = parse_double(f[c + 1]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace fpmech
