#include "fpmech/config.hpp"

#include <json.hpp>

#include "fpmech/util.hpp"

namespace fpmech {

namespace {

nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j;
    j["metadata_path"] = c.metadata_path;
    j["structures_dir"] = c.structures_dir;
    j["out_dir"] = c.out_dir;
    j["seed_table_path"] = c.seed_table_path;
    j["seeds"] = c.seeds;
    j["n_folds"] = c.n_folds;
    j["locality_radius"] = c.locality_radius;
    j["edge_cutoff"] = c.edge_cutoff;
    j["beta_threshold"] = c.beta_threshold;
    j["epsilon"] = c.epsilon;
    j["top_k_features"] = c.top_k_features;
    j["et_n_trees"] = c.et.n_trees;
    j["et_candidate_features_per_split"] = c.et.candidate_features_per_split;
    j["et_min_samples_split"] = c.et.min_samples_split;
    j["et_rng_seed"] = c.et.rng_seed;
    j["screening_k"] = c.screening_k;
    j["jaccard_tau"] = c.jaccard_tau;
    return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
    auto set = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    set("metadata_path", c.metadata_path);
    set("structures_dir", c.structures_dir);
    set("out_dir", c.out_dir);
    set("seed_table_path", c.seed_table_path);
    set("seeds", c.seeds);
    set("n_folds", c.n_folds);
    set("locality_radius", c.locality_radius);
    set("edge_cutoff", c.edge_cutoff);
    set("beta_threshold", c.beta_threshold);
    set("epsilon", c.epsilon);
    set("top_k_features", c.top_k_features);
    set("et_n_trees", c.et.n_trees);
    set("et_candidate_features_per_split", c.et.candidate_features_per_split);
    set("et_min_samples_split", c.et.min_samples_split);
    set("et_rng_seed", c.et.rng_seed);
    set("screening_k", c.screening_k);
    set("jaccard_tau", c.jaccard_tau);
}

}  // namespace

std::string RunConfig::to_json() const { return config_json(*this).dump(2); }

RunConfig RunConfig::from_json(const std::string& text) {
    RunConfig c;
    apply_json(c, nlohmann::json::parse(text));
    return c;
}

void RunConfig::merge_json(const std::string& text) { apply_json(*this, nlohmann::json::parse(text)); }

std::string RunConfig::content_hash() const { return hex64(fnv1a64(to_json())); }

}  // namespace fpmech
