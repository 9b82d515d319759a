#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpmech/config.hpp"
#include "fpmech/feature_table.hpp"
#include "fpmech/metadata.hpp"
#include "fpmech/metrics.hpp"
#include "fpmech/model.hpp"
#include "fpmech/splits.hpp"

namespace fpmech {

// Featurized benchmark: records and feature rows aligned one-to-one.
struct Dataset {
    std::vector<ProteinRecord> records;
    FeatureTable features;
    std::vector<Band> bands;

    size_t size() const { return records.size(); }
    std::vector<size_t> included() const;  // rows routed to a defined band
};

// Joins metadata and features by id; feature-table row order wins.
Dataset make_dataset(const std::vector<ProteinRecord>& records, FeatureTable features);

enum class Routing { band_specific, global };
enum class Target { true_y, shuffled_y };
enum class BaselineKind { none, band_mean, emission_only };

struct AblationCondition {
    std::string name;
    std::vector<std::string> feature_columns;  // resolved subset of the schema
    Routing routing = Routing::band_specific;
    Target target = Target::true_y;
    BaselineKind baseline = BaselineKind::none;

    int feature_count() const;  // candidate count before Top-K selection
};

// The audited condition matrix, in reporting order. Counts:
// 52, 0, 1, 52, 7, 21, 24, 45, 52.
std::vector<AblationCondition> standard_conditions();
AblationCondition condition_by_name(const std::string& name);

struct SeedMetricsRow {
    uint64_t seed = 0;
    std::string scope = "pooled";
    RegMetrics reg;
    std::map<int, double> bright_p;  // K -> precision
    std::map<int, double> dark_p;
};

struct OofPrediction {
    uint64_t seed = 0;
    int fold = 0;
    std::string id;
    Band band = Band::Excluded;
    double y = 0.0;
    double yhat = 0.0;
    char bright = 0;  // labels from the training-fold quantiles
    char dark = 0;
};

struct SkipRecord {
    uint64_t seed = 0;
    int fold = 0;
    std::string scope;
    std::string reason;
};

// Training-side state of one (seed, fold, band) cell, kept so leakage checks
// and the recurrence table can inspect exactly what each fold trained on.
struct CvCell {
    uint64_t seed = 0;
    int fold = 0;
    std::string scope;  // band name or "global"
    std::vector<std::string> selected;
    double fold_q90 = 0.0;  // screening thresholds over the whole training fold
    double fold_q10 = 0.0;
    double band_q90 = 0.0;  // the band model's own-training-row quantiles
    double band_q10 = 0.0;
};

struct CvResult {
    std::vector<SeedMetricsRow> per_seed;
    std::vector<OofPrediction> predictions;  // ordered by (seed, dataset row)
    std::vector<SkipRecord> skips;
    std::vector<CvCell> cells;
    std::map<std::pair<std::string, std::string>, int> recurrence;  // (band, column) -> count
};

// Five-seed, five-fold out-of-fold protocol. Selection, fitting and bright/
// dark thresholds are recomputed inside each training fold only.
CvResult run_random_cv(const Dataset& ds, const RunConfig& cfg, const AblationCondition& cond);

// Same protocol with externally fixed fold plans (one per seed, over the
// included ids). Lets callers pin folds while perturbing rows.
CvResult run_random_cv_with_plans(const Dataset& ds, const std::vector<FoldPlan>& plans,
                                  const RunConfig& cfg, const AblationCondition& cond);

struct HomologyResult {
    std::vector<SeedMetricsRow> rows;  // scope in {overall, 70-85, 50-70, <50}
    std::vector<OofPrediction> predictions;
    std::vector<SkipRecord> skips;
    // serialized band models per (seed, scope) label, round-trip exact
    std::vector<std::pair<std::string, std::string>> models;
};

// Fixed-split evaluation: fit per band on the fixed train set, predict every
// test protein, report per bucket and overall. Empty buckets are absent.
HomologyResult run_homology_eval(const Dataset& ds, const SplitPlan& split, const RunConfig& cfg,
                                 const AblationCondition& cond);

struct StressSetting {
    std::string name;
    enum class Kind { clean, gauss, dropout, bad_subset } kind = Kind::clean;
    double param = 0.0;  // sigma, dropout p, or subset fraction
};
std::vector<StressSetting> standard_stress_settings();

struct StressRow {
    std::string setting;
    double r_enrichment = 0.0;  // pooled over seeds
    double r_full = 0.0;
    double r_v54 = 0.0;
    bool has_buffer = false;
    double buffer_r = 0.0;
    double ci_lo = 0.0;  // paired bootstrap, 1000 resamples
    double ci_hi = 0.0;
};

struct StressResult {
    std::vector<StressRow> rows;
};

// Clean training folds; held-out enrichment columns perturbed per setting;
// clamp columns never touched. Compares enrichment-only vs full vs clamp-only.
StressResult v54_stress(const Dataset& ds, const RunConfig& cfg,
                        const std::vector<StressSetting>& settings = standard_stress_settings());

}  // namespace fpmech
