#include "fpmech/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

std::vector<size_t> Dataset::included() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < records.size(); ++i) {
        if (bands[i] != Band::Excluded) out.push_back(i);
    }
    return out;
}

Dataset make_dataset(const std::vector<ProteinRecord>& records, FeatureTable features) {
    std::map<std::string, const ProteinRecord*> by_id;
    for (const auto& r : records) by_id[r.id] = &r;

    Dataset ds;
    for (size_t i = 0; i < features.ids.size(); ++i) {
        const auto it = by_id.find(features.ids[i]);
        if (it == by_id.end()) throw MissingColumn("feature row without metadata: " + features.ids[i]);
        ds.records.push_back(*it->second);
        ds.bands.push_back(assign_band(it->second->emission_nm));
    }
    ds.features = std::move(features);
    return ds;
}

int AblationCondition::feature_count() const {
    if (baseline == BaselineKind::band_mean) return 0;
    if (baseline == BaselineKind::emission_only) return 1;
    return static_cast<int>(feature_columns.size());
}

std::vector<AblationCondition> standard_conditions() {
    const auto& sc = FeatureSchema::instance();
    std::vector<AblationCondition> out;
    auto add = [&](std::string name, std::vector<std::string> cols, Routing routing, Target target,
                   BaselineKind baseline) {
        AblationCondition c;
        c.name = std::move(name);
        c.feature_columns = std::move(cols);
        c.routing = routing;
        c.target = target;
        c.baseline = baseline;
        out.push_back(std::move(c));
    };
    add("shuffle_labels", sc.nonid_columns, Routing::band_specific, Target::shuffled_y,
        BaselineKind::none);
    add("band_mean", {}, Routing::band_specific, Target::true_y, BaselineKind::band_mean);
    add("emission_only", {}, Routing::band_specific, Target::true_y, BaselineKind::emission_only);
    add("global_pool", sc.nonid_columns, Routing::global, Target::true_y, BaselineKind::none);
    add("clamp_only", sc.clamp_columns, Routing::band_specific, Target::true_y, BaselineKind::none);
    add("steric_only", sc.steric_nonid, Routing::band_specific, Target::true_y, BaselineKind::none);
    add("hydrophobic_only", sc.hydrophobic_nonid, Routing::band_specific, Target::true_y,
        BaselineKind::none);
    add("enrichment_only", sc.enrichment_nonid, Routing::band_specific, Target::true_y,
        BaselineKind::none);
    add("full", sc.nonid_columns, Routing::band_specific, Target::true_y, BaselineKind::none);
    return out;
}

AblationCondition condition_by_name(const std::string& name) {
    for (auto& c : standard_conditions()) {
        if (c.name == name) return c;
    }
    throw Error("unknown condition '" + name + "'");
}

namespace {

constexpr std::array<Band, 3> kModelBands = {Band::GFP_like, Band::Red, Band::FarRed};

// condition feature matrix over the included rows, in included order
struct CondData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> X;
};

CondData build_cond_matrix(const Dataset& ds, const std::vector<size_t>& included,
                           const AblationCondition& cond) {
    CondData cd;
    if (cond.baseline == BaselineKind::band_mean) {
        cd.X.assign(included.size(), {});
        return cd;
    }
    if (cond.baseline == BaselineKind::emission_only) {
        cd.columns = {"emission_nm"};
        for (size_t row : included) cd.X.push_back({ds.records[row].emission_nm});
        return cd;
    }
    cd.columns = cond.feature_columns;
    std::vector<int> col_idx;
    for (const auto& name : cd.columns) col_idx.push_back(ds.features.column_index(name));
    for (size_t row : included) {
        std::vector<double> r;
        r.reserve(col_idx.size());
        for (int c : col_idx) r.push_back(ds.features.rows[row][c]);
        cd.X.push_back(std::move(r));
    }
    return cd;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson_or_zero(std::span<const double> y, std::span<const double> yhat) {
    const size_t n = y.size();
    if (n < 2) return 0.0;
    double my = 0.0, mp = 0.0;
    for (size_t i = 0; i < n; ++i) {
        my += y[i];
        mp += yhat[i];
    }
    my /= n;
    mp /= n;
    double syy = 0.0, spp = 0.0, syp = 0.0;
    for (size_t i = 0; i < n; ++i) {
        syy += (y[i] - my) * (y[i] - my);
        spp += (yhat[i] - mp) * (yhat[i] - mp);
        syp += (y[i] - my) * (yhat[i] - mp);
    }
    if (syy <= 0.0 || spp <= 0.0) return 0.0;
    return syp / std::sqrt(syy * spp);
}

uint64_t cell_seed(const RunConfig& cfg, uint64_t seed, int fold, const std::string& scope,
                   const std::string& cond_name) {
    return derive_seed({"et", std::to_string(cfg.et.rng_seed), std::to_string(seed),
                        std::to_string(fold), scope, cond_name});
}

// One fitted training cell: either a band model or a band-mean constant.
struct FittedCell {
    bool is_mean = false;
    double mean = 0.0;
    BandModel model;
};

std::optional<FittedCell> fit_cell(const CondData& cd, const std::vector<double>& y,
                                   const std::vector<size_t>& train_pos, Band band,
                                   const AblationCondition& cond, const RunConfig& cfg,
                                   uint64_t forest_seed, std::string* why_skipped) {
    FittedCell out;
    if (cond.baseline == BaselineKind::band_mean) {
        if (train_pos.empty()) {
            *why_skipped = "no training rows for band mean";
            return std::nullopt;
        }
        out.is_mean = true;
        std::vector<double> ytr;
        for (size_t p : train_pos) ytr.push_back(y[p]);
        out.mean = mean_of(ytr);
        out.model.train_q90 = quantile(ytr, 0.90);
        out.model.train_q10 = quantile(ytr, 0.10);
        return out;
    }
    if (train_pos.size() < 3) {
        *why_skipped = "fewer than 3 training rows";
        return std::nullopt;
    }
    std::vector<std::vector<double>> Xtr;
    std::vector<double> ytr;
    for (size_t p : train_pos) {
        Xtr.push_back(cd.X[p]);
        ytr.push_back(y[p]);
    }
    EtRegressorConfig et = cfg.et;
    et.rng_seed = forest_seed;
    try {
        out.model = fit_band(Xtr, cd.columns, ytr, band, et, cfg.top_k_features);
    } catch (const InsufficientBandData& e) {
        *why_skipped = e.what();
        return std::nullopt;
    }
    return out;
}

double cell_predict(const FittedCell& cell, const std::vector<double>& x) {
    if (cell.is_mean) return std::clamp(cell.mean, 0.0, 1.0);
    std::vector<double> sub;
    sub.reserve(cell.model.selected_idx.size());
    for (int c : cell.model.selected_idx) sub.push_back(x[c]);
    return std::clamp(cell.model.forest.predict_row(sub), 0.0, 1.0);
}

void append_screening(SeedMetricsRow& row, const std::vector<char>& bright,
                      const std::vector<char>& dark, const std::vector<double>& yhat,
                      const std::vector<int>& ks) {
    for (int k : ks) {
        if (k <= 0 || static_cast<size_t>(k) > yhat.size()) continue;
        const auto [bp, dp] = topk_precision_labeled(bright, dark, yhat, k);
        row.bright_p[k] = bp;
        row.dark_p[k] = dp;
    }
}

}  // namespace

CvResult run_random_cv_with_plans(const Dataset& ds, const std::vector<FoldPlan>& plans,
                                  const RunConfig& cfg, const AblationCondition& cond) {
    const std::vector<size_t> included = ds.included();
    const size_t m = included.size();
    if (m < 10) throw TooFewSamples("random CV needs at least 10 band-assignable rows");
    if (plans.size() != cfg.seeds.size()) throw Error("one fold plan per seed required");

    std::vector<std::string> ids(m);
    std::vector<double> y_true(m);
    std::vector<Band> band_of(m);
    for (size_t p = 0; p < m; ++p) {
        ids[p] = ds.records[included[p]].id;
        y_true[p] = ds.records[included[p]].qy;
        band_of[p] = ds.bands[included[p]];
    }
    const CondData cd = build_cond_matrix(ds, included, cond);

    CvResult result;
    for (size_t si = 0; si < cfg.seeds.size(); ++si) {
        const uint64_t seed = cfg.seeds[si];

        std::vector<double> y = y_true;
        if (cond.target == Target::shuffled_y) {
            std::vector<size_t> perm(m);
            std::iota(perm.begin(), perm.end(), 0);
            Rng rng(derive_seed({"shuffle", std::to_string(seed), cond.name}));
            rng.shuffle(perm);
            for (size_t p = 0; p < m; ++p) y[p] = y_true[perm[p]];
        }

        const FoldPlan& plan = plans[si];
        std::vector<int> fold_of(m);
        for (size_t p = 0; p < m; ++p) {
            const auto it = plan.fold_of.find(ids[p]);
            if (it == plan.fold_of.end()) throw Error("fold plan lacks id " + ids[p]);
            fold_of[p] = it->second;
        }

        // per-position prediction slots for this seed
        std::vector<char> have(m, 0);
        std::vector<double> pred(m, 0.0);
        std::vector<char> bright(m, 0), dark(m, 0);
        std::vector<int> fold_used(m, -1);

        for (int f = 0; f < cfg.n_folds; ++f) {
            std::vector<size_t> train_pos, test_pos;
            for (size_t p = 0; p < m; ++p) (fold_of[p] == f ? test_pos : train_pos).push_back(p);
            if (train_pos.empty() || test_pos.empty()) continue;

            std::vector<double> ytr;
            for (size_t p : train_pos) ytr.push_back(y[p]);
            const double fold_q90 = quantile(ytr, 0.90);
            const double fold_q10 = quantile(ytr, 0.10);

            struct Scope {
                std::string name;
                std::optional<Band> band;
            };
            std::vector<Scope> scopes;
            if (cond.routing == Routing::global) {
                scopes.push_back({"global", std::nullopt});
            } else {
                for (Band b : kModelBands) scopes.push_back({band_name(b), b});
            }

            for (const auto& scope : scopes) {
                std::vector<size_t> tr, te;
                for (size_t p : train_pos) {
                    if (!scope.band || band_of[p] == *scope.band) tr.push_back(p);
                }
                for (size_t p : test_pos) {
                    if (!scope.band || band_of[p] == *scope.band) te.push_back(p);
                }
                if (te.empty() && tr.empty()) continue;

                std::string why;
                const auto cell = fit_cell(cd, y, tr, scope.band.value_or(Band::Excluded), cond,
                                           cfg, cell_seed(cfg, seed, f, scope.name, cond.name),
                                           &why);
                if (!cell) {
                    result.skips.push_back({seed, f, scope.name, why});
                    continue;
                }

                CvCell cc;
                cc.seed = seed;
                cc.fold = f;
                cc.scope = scope.name;
                cc.selected = cell->is_mean ? std::vector<std::string>{} : cell->model.selected;
                cc.fold_q90 = fold_q90;
                cc.fold_q10 = fold_q10;
                cc.band_q90 = cell->model.train_q90;
                cc.band_q10 = cell->model.train_q10;
                result.cells.push_back(cc);

                for (size_t i = 0; i < std::min<size_t>(10, cc.selected.size()); ++i) {
                    ++result.recurrence[{scope.name, cc.selected[i]}];
                }

                for (size_t p : te) {
                    pred[p] = cell_predict(*cell, cd.X[p]);
                    have[p] = 1;
                    bright[p] = y[p] >= fold_q90 ? 1 : 0;
                    dark[p] = y[p] <= fold_q10 ? 1 : 0;
                    fold_used[p] = f;
                }
            }
        }

        // pooled per-seed vectors in dataset row order
        std::vector<double> py, pp;
        std::vector<char> pb, pd;
        for (size_t p = 0; p < m; ++p) {
            if (!have[p]) continue;
            result.predictions.push_back(
                {seed, fold_used[p], ids[p], band_of[p], y[p], pred[p], bright[p], dark[p]});
            py.push_back(y[p]);
            pp.push_back(pred[p]);
            pb.push_back(bright[p]);
            pd.push_back(dark[p]);
        }
        if (py.size() < 2) {
            result.skips.push_back({seed, -1, "pooled", "fewer than 2 out-of-fold predictions"});
            continue;
        }
        SeedMetricsRow row;
        row.seed = seed;
        row.reg = pearson_mae_compression(py, pp);
        append_screening(row, pb, pd, pp, cfg.screening_k);
        result.per_seed.push_back(std::move(row));
    }
    return result;
}

CvResult run_random_cv(const Dataset& ds, const RunConfig& cfg, const AblationCondition& cond) {
    const std::vector<size_t> included = ds.included();
    const size_t m = included.size();
    if (m < 10) throw TooFewSamples("random CV needs at least 10 band-assignable rows");

    std::vector<std::string> ids(m);
    std::vector<double> y_true(m);
    for (size_t p = 0; p < m; ++p) {
        ids[p] = ds.records[included[p]].id;
        y_true[p] = ds.records[included[p]].qy;
    }

    std::vector<FoldPlan> plans;
    for (uint64_t seed : cfg.seeds) {
        std::vector<double> y = y_true;
        if (cond.target == Target::shuffled_y) {
            std::vector<size_t> perm(m);
            std::iota(perm.begin(), perm.end(), 0);
            Rng rng(derive_seed({"shuffle", std::to_string(seed), cond.name}));
            rng.shuffle(perm);
            for (size_t p = 0; p < m; ++p) y[p] = y_true[perm[p]];
        }
        // folds stratify on the target actually fit, mirroring the protocol
        plans.push_back(make_folds(ids, y, seed, cfg.n_folds));
    }
    return run_random_cv_with_plans(ds, plans, cfg, cond);
}

HomologyResult run_homology_eval(const Dataset& ds, const SplitPlan& split, const RunConfig& cfg,
                                 const AblationCondition& cond) {
    const std::vector<size_t> included = ds.included();
    const size_t m = included.size();

    std::vector<std::string> ids(m);
    std::vector<double> y(m);
    std::vector<Band> band_of(m);
    for (size_t p = 0; p < m; ++p) {
        ids[p] = ds.records[included[p]].id;
        y[p] = ds.records[included[p]].qy;
        band_of[p] = ds.bands[included[p]];
    }
    const CondData cd = build_cond_matrix(ds, included, cond);

    const std::set<std::string> train_set(split.train_ids.begin(), split.train_ids.end());
    const std::set<std::string> test_set(split.test_ids.begin(), split.test_ids.end());
    std::vector<size_t> train_pos, test_pos;
    for (size_t p = 0; p < m; ++p) {
        if (train_set.count(ids[p])) train_pos.push_back(p);
        if (test_set.count(ids[p])) test_pos.push_back(p);
    }
    if (train_pos.size() < 3 || test_pos.empty()) {
        throw TooFewSamples("homology evaluation needs a usable fixed train/test split");
    }

    std::vector<double> ytr_all;
    for (size_t p : train_pos) ytr_all.push_back(y[p]);
    const double q90 = quantile(ytr_all, 0.90);  // fixed-training-set thresholds
    const double q10 = quantile(ytr_all, 0.10);

    HomologyResult result;
    for (uint64_t seed : cfg.seeds) {
        std::vector<char> have(m, 0);
        std::vector<double> pred(m, 0.0);

        struct Scope {
            std::string name;
            std::optional<Band> band;
        };
        std::vector<Scope> scopes;
        if (cond.routing == Routing::global) {
            scopes.push_back({"global", std::nullopt});
        } else {
            for (Band b : kModelBands) scopes.push_back({band_name(b), b});
        }

        for (const auto& scope : scopes) {
            std::vector<size_t> tr, te;
            for (size_t p : train_pos) {
                if (!scope.band || band_of[p] == *scope.band) tr.push_back(p);
            }
            for (size_t p : test_pos) {
                if (!scope.band || band_of[p] == *scope.band) te.push_back(p);
            }
            if (te.empty()) continue;
            std::string why;
            const auto cell =
                fit_cell(cd, y, tr, scope.band.value_or(Band::Excluded), cond, cfg,
                         cell_seed(cfg, seed, 0, scope.name, cond.name + "/homology"), &why);
            if (!cell) {
                result.skips.push_back({seed, 0, scope.name, why});
                continue;
            }
            if (!cell->is_mean) {
                result.models.emplace_back("seed" + std::to_string(seed) + "_" + scope.name,
                                           band_model_to_json(cell->model));
            }
            for (size_t p : te) {
                pred[p] = cell_predict(*cell, cd.X[p]);
                have[p] = 1;
            }
        }

        // overall plus per-bucket scopes over the predicted test rows
        struct ScopeRows {
            std::string name;
            std::vector<size_t> pos;
        };
        std::vector<ScopeRows> reports{{"overall", {}}};
        for (Bucket b : {Bucket::B70_85, Bucket::B50_70, Bucket::Blt50}) {
            reports.push_back({bucket_name(b), {}});
        }
        for (size_t p : test_pos) {
            if (!have[p]) continue;
            reports[0].pos.push_back(p);
            const Bucket b = split.bucket.at(ids[p]);
            reports[1 + static_cast<int>(b)].pos.push_back(p);
            result.predictions.push_back({seed, 0, ids[p], band_of[p], y[p], pred[p],
                                          static_cast<char>(y[p] >= q90 ? 1 : 0),
                                          static_cast<char>(y[p] <= q10 ? 1 : 0)});
        }
        for (const auto& rep : reports) {
            if (rep.pos.size() < 2) continue;  // empty bucket: absent, not zero
            std::vector<double> ry, rp;
            std::vector<char> rb, rd;
            for (size_t p : rep.pos) {
                ry.push_back(y[p]);
                rp.push_back(pred[p]);
                rb.push_back(y[p] >= q90 ? 1 : 0);
                rd.push_back(y[p] <= q10 ? 1 : 0);
            }
            SeedMetricsRow row;
            row.seed = seed;
            row.scope = rep.name;
            try {
                row.reg = pearson_mae_compression(ry, rp);
            } catch (const DegenerateTarget&) {
                continue;
            }
            append_screening(row, rb, rd, rp, cfg.screening_k);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

std::vector<StressSetting> standard_stress_settings() {
    using K = StressSetting::Kind;
    return {{"clean", K::clean, 0.0},          {"gauss_sigma_0.10", K::gauss, 0.10},
            {"gauss_sigma_0.20", K::gauss, 0.20}, {"gauss_sigma_0.30", K::gauss, 0.30},
            {"dropout_p_0.10", K::dropout, 0.10}, {"dropout_p_0.20", K::dropout, 0.20},
            {"bad_subset_20pct", K::bad_subset, 0.20}};
}

StressResult v54_stress(const Dataset& ds, const RunConfig& cfg,
                        const std::vector<StressSetting>& settings) {
    const auto& sc = FeatureSchema::instance();
    struct FeatureSet {
        std::string name;
        const std::vector<std::string>* cols;
    };
    const std::vector<FeatureSet> sets = {{"enrichment_only", &sc.enrichment_nonid},
                                          {"full", &sc.nonid_columns},
                                          {"v54_only", &sc.clamp_columns}};

    const std::vector<size_t> included = ds.included();
    const size_t m = included.size();
    if (m < 10) throw TooFewSamples("stress test needs at least 10 band-assignable rows");

    std::vector<std::string> ids(m);
    std::vector<double> y(m);
    std::vector<Band> band_of(m);
    for (size_t p = 0; p < m; ++p) {
        ids[p] = ds.records[included[p]].id;
        y[p] = ds.records[included[p]].qy;
        band_of[p] = ds.bands[included[p]];
    }

    // full 121-column rows in included order; perturbations act on copies
    std::vector<std::vector<double>> X(m);
    for (size_t p = 0; p < m; ++p) X[p] = ds.features.rows[included[p]];
    std::vector<int> enr_idx;
    for (const auto& name : sc.enrichment_nonid) enr_idx.push_back(ds.features.column_index(name));
    std::map<std::string, std::vector<int>> set_idx;
    for (const auto& fs : sets) {
        std::vector<int> idx;
        for (const auto& name : *fs.cols) idx.push_back(ds.features.column_index(name));
        set_idx[fs.name] = idx;
    }

    // train once per (set, seed, fold, band) on clean folds; reuse per setting
    struct CellKey {
        size_t si;
        int fold;
        int band;
        bool operator<(const CellKey& o) const {
            return std::tie(si, fold, band) < std::tie(o.si, o.fold, o.band);
        }
    };
    std::map<std::string, std::map<CellKey, BandModel>> models;
    std::vector<FoldPlan> plans;
    std::vector<std::vector<int>> fold_of(cfg.seeds.size(), std::vector<int>(m));
    // training-fold enrichment stats for the noise scale, per (seed, fold)
    struct FoldStats {
        std::vector<double> mean, sd;  // per enrichment column
    };
    std::map<std::pair<size_t, int>, FoldStats> stats;

    for (size_t si = 0; si < cfg.seeds.size(); ++si) {
        plans.push_back(make_folds(ids, y, cfg.seeds[si], cfg.n_folds));
        for (size_t p = 0; p < m; ++p) fold_of[si][p] = plans[si].fold_of.at(ids[p]);

        for (int f = 0; f < cfg.n_folds; ++f) {
            std::vector<size_t> train_pos;
            for (size_t p = 0; p < m; ++p) {
                if (fold_of[si][p] != f) train_pos.push_back(p);
            }
            FoldStats fs;
            fs.mean.resize(enr_idx.size());
            fs.sd.resize(enr_idx.size());
            for (size_t c = 0; c < enr_idx.size(); ++c) {
                double sum = 0.0;
                for (size_t p : train_pos) sum += X[p][enr_idx[c]];
                const double mu = sum / train_pos.size();
                double ss = 0.0;
                for (size_t p : train_pos) {
                    const double d = X[p][enr_idx[c]] - mu;
                    ss += d * d;
                }
                fs.mean[c] = mu;
                fs.sd[c] = std::sqrt(ss / train_pos.size());
            }
            stats[{si, f}] = fs;

            for (const auto& fset : sets) {
                for (int bi = 0; bi < 3; ++bi) {
                    const Band band = kModelBands[bi];
                    std::vector<std::vector<double>> Xtr;
                    std::vector<double> ytr;
                    for (size_t p : train_pos) {
                        if (band_of[p] != band) continue;
                        std::vector<double> row;
                        for (int c : set_idx[fset.name]) row.push_back(X[p][c]);
                        Xtr.push_back(std::move(row));
                        ytr.push_back(y[p]);
                    }
                    if (Xtr.size() < 3) continue;  // skipped uniformly across sets
                    EtRegressorConfig et = cfg.et;
                    et.rng_seed = cell_seed(cfg, cfg.seeds[si], f, band_name(band),
                                            "stress/" + fset.name);
                    try {
                        models[fset.name][{si, f, bi}] =
                            fit_band(Xtr, *fset.cols, ytr, band, et, cfg.top_k_features);
                    } catch (const InsufficientBandData&) {
                    }
                }
            }
        }
    }

    // pooled predictions per (setting, set), aligned by (seed, position)
    struct Pooled {
        std::vector<double> y;
        std::map<std::string, std::vector<double>> yhat;  // per feature set
    };
    std::map<std::string, Pooled> pooled;

    for (const auto& st : settings) {
        Pooled pool;
        for (const auto& fset : sets) pool.yhat[fset.name] = {};
        for (size_t si = 0; si < cfg.seeds.size(); ++si) {
            for (int f = 0; f < cfg.n_folds; ++f) {
                std::vector<size_t> test_pos;
                for (size_t p = 0; p < m; ++p) {
                    if (fold_of[si][p] == f) test_pos.push_back(p);
                }
                if (test_pos.empty()) continue;
                const FoldStats& fs = stats.at({si, f});

                // one perturbed copy per (seed, fold, setting), shared by all
                // feature sets so the comparison stays paired
                std::map<size_t, std::vector<double>> perturbed;
                for (size_t p : test_pos) perturbed[p] = X[p];
                Rng rng(derive_seed({"stress", st.name, std::to_string(cfg.seeds[si]),
                                     std::to_string(f)}));
                if (st.kind == StressSetting::Kind::gauss) {
                    for (size_t p : test_pos) {
                        auto& row = perturbed[p];
                        for (size_t c = 0; c < enr_idx.size(); ++c) {
                            row[enr_idx[c]] += st.param * fs.sd[c] * rng.next_gauss();
                        }
                    }
                } else if (st.kind == StressSetting::Kind::dropout) {
                    for (size_t p : test_pos) {
                        auto& row = perturbed[p];
                        for (size_t c = 0; c < enr_idx.size(); ++c) {
                            if (rng.next_unit() < st.param) row[enr_idx[c]] = fs.mean[c];
                        }
                    }
                } else if (st.kind == StressSetting::Kind::bad_subset) {
                    std::vector<size_t> order = test_pos;
                    rng.shuffle(order);
                    const size_t k = static_cast<size_t>(st.param * test_pos.size());
                    std::set<size_t> chosen(order.begin(), order.begin() + k);
                    for (size_t p : test_pos) {
                        if (!chosen.count(p)) continue;
                        auto& row = perturbed[p];
                        for (size_t c = 0; c < enr_idx.size(); ++c) {
                            row[enr_idx[c]] += 0.3 * fs.sd[c] * rng.next_gauss();
                        }
                    }
                }

                for (size_t p : test_pos) {
                    const int bi = static_cast<int>(
                        std::find(kModelBands.begin(), kModelBands.end(), band_of[p]) -
                        kModelBands.begin());
                    // a row enters the pool only when every feature set has a model
                    bool all = true;
                    for (const auto& fset : sets) {
                        if (!models[fset.name].count({si, f, bi})) all = false;
                    }
                    if (!all) continue;
                    pool.y.push_back(y[p]);
                    for (const auto& fset : sets) {
                        const BandModel& mdl = models[fset.name].at({si, f, bi});
                        std::vector<double> row;
                        for (int c : set_idx[fset.name]) row.push_back(perturbed[p][c]);
                        std::vector<double> sub;
                        for (int c : mdl.selected_idx) sub.push_back(row[c]);
                        pool.yhat[fset.name].push_back(
                            std::clamp(mdl.forest.predict_row(sub), 0.0, 1.0));
                    }
                }
            }
        }
        pooled[st.name] = std::move(pool);
    }

    const Pooled& clean = pooled.at("clean");
    StressResult result;
    for (const auto& st : settings) {
        const Pooled& pool = pooled.at(st.name);
        StressRow row;
        row.setting = st.name;
        row.r_enrichment = pearson_or_zero(pool.y, pool.yhat.at("enrichment_only"));
        row.r_full = pearson_or_zero(pool.y, pool.yhat.at("full"));
        row.r_v54 = pearson_or_zero(pool.y, pool.yhat.at("v54_only"));
        if (st.kind != StressSetting::Kind::clean) {
            row.has_buffer = true;
            const auto& ce = clean.yhat.at("enrichment_only");
            const auto& cf = clean.yhat.at("full");
            const auto& se = pool.yhat.at("enrichment_only");
            const auto& sf = pool.yhat.at("full");
            auto buffer_on = [&](const std::vector<size_t>& take) {
                std::vector<double> by, bce, bcf, bse, bsf;
                for (size_t i : take) {
                    by.push_back(pool.y[i]);
                    bce.push_back(ce[i]);
                    bcf.push_back(cf[i]);
                    bse.push_back(se[i]);
                    bsf.push_back(sf[i]);
                }
                const double degr_enr = pearson_or_zero(by, bce) - pearson_or_zero(by, bse);
                const double degr_full = pearson_or_zero(by, bcf) - pearson_or_zero(by, bsf);
                return degr_enr - degr_full;
            };
            std::vector<size_t> all(pool.y.size());
            std::iota(all.begin(), all.end(), 0);
            row.buffer_r = buffer_on(all);

            Rng rng(derive_seed({"stress-bootstrap", st.name}));
            std::vector<double> boots;
            constexpr int kResamples = 1000;
            for (int b = 0; b < kResamples; ++b) {
                std::vector<size_t> take(pool.y.size());
                for (auto& t : take) t = rng.next_below(pool.y.size());
                boots.push_back(buffer_on(take));
            }
            row.ci_lo = quantile(boots, 0.025);
            row.ci_hi = quantile(boots, 0.975);
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace fpmech
