#pragma once

#include <string>
#include <vector>

#include "fpmech/propagate.hpp"

namespace fpmech {

// One row per protein over the 121 candidate columns.
struct FeatureTable {
    std::vector<std::string> columns;  // schema candidate order
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;
    static FeatureTable with_schema_columns();
};

std::string feature_table_to_csv(const FeatureTable& t);
FeatureTable feature_table_from_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fpmech
