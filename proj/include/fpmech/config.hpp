#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpmech/model.hpp"
#include "fpmech/propagate.hpp"

namespace fpmech {

struct RunConfig {
    std::string metadata_path;
    std::string structures_dir;
    std::string out_dir = "out";
    std::string seed_table_path;  // empty = built-in table

    std::vector<uint64_t> seeds = {0, 1, 2, 3, 4};
    int n_folds = 5;

    double locality_radius = 12.0;
    double edge_cutoff = 8.0;
    double beta_threshold = 0.05;
    double epsilon = 1e-8;

    int top_k_features = 25;
    EtRegressorConfig et;
    std::vector<int> screening_k = {5, 10, 15, 20, 25};
    double jaccard_tau = 0.85;

    PropagateConfig propagate_config() const {
        PropagateConfig p;
        p.graph.locality_radius = locality_radius;
        p.graph.edge_cutoff = edge_cutoff;
        p.beta_threshold = beta_threshold;
        p.epsilon = epsilon;
        return p;
    }

    std::string to_json() const;        // canonical serialization (sorted keys)
    static RunConfig from_json(const std::string& text);
    void merge_json(const std::string& text);  // apply overrides from a config file
    std::string content_hash() const;
};

}  // namespace fpmech
