#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fpmech {

enum class Band { GFP_like, Red, FarRed, Excluded };

const char* band_name(Band b);
Band assign_band(double emission_nm);

struct EtRegressorConfig {
    int n_trees = 300;
    int candidate_features_per_split = 0;  // 0 = all features
    int min_samples_split = 2;
    uint64_t rng_seed = 0;
};

// Extremely randomized trees: no bootstrap, one uniform random cut-point per
// candidate feature within the node's observed range, best variance reduction
// kept, trees grown until pure or below min_samples_split. Deterministic:
// tree i runs on its own stream seeded with rng_seed ^ i.
class ExtraTreesRegressor {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    // X is row-major, n_rows x n_cols
    void fit(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
             const EtRegressorConfig& cfg);
    double predict_row(std::span<const double> x) const;

    const std::vector<Tree>& trees() const { return trees_; }
    const EtRegressorConfig& config() const { return cfg_; }

    std::string to_json() const;
    static ExtraTreesRegressor from_json(const std::string& text);

private:
    EtRegressorConfig cfg_;
    std::vector<Tree> trees_;
};

// Pearson |correlation| ranking against y over the given columns; constant
// columns score 0 and are never selected. Descending |rho| with lexicographic
// column-name tie-break; keeps at most k names.
std::vector<std::string> select_features(const std::vector<std::vector<double>>& X,
                                         const std::vector<std::string>& columns,
                                         const std::vector<double>& y, int k);

struct BandModel {
    Band band = Band::Excluded;
    std::vector<std::string> selected;
    std::vector<int> selected_idx;  // into the column list the model was fit with
    ExtraTreesRegressor forest;
    double train_q90 = 0.0;
    double train_q10 = 0.0;
};

// Linear-interpolation quantile on a copy of v (same convention everywhere).
double quantile(std::vector<double> v, double p);

// Selection, forest fit and own-training-row quantiles for one band.
// X columns follow `columns`; rows must already be restricted to the band.
BandModel fit_band(const std::vector<std::vector<double>>& X,
                   const std::vector<std::string>& columns, const std::vector<double>& y, Band band,
                   const EtRegressorConfig& cfg, int top_k);

// Routes through the band model and clips to [0,1]. `row` follows the same
// column list the model was fit with.
double predict(const std::map<Band, BandModel>& models, std::span<const double> row, double em);

std::string band_model_to_json(const BandModel& m);
BandModel band_model_from_json(const std::string& text);

}  // namespace fpmech
