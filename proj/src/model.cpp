#include "fpmech/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

const char* band_name(Band b) {
    switch (b) {
        case Band::GFP_like: return "GFP_like";
        case Band::Red: return "Red";
        case Band::FarRed: return "FarRed";
        case Band::Excluded: return "Excluded";
    }
    return "?";
}

Band assign_band(double em) {
    if (em >= 500.0 && em < 560.0) return Band::GFP_like;
    if (em >= 580.0 && em < 610.0) return Band::Red;
    if (em >= 610.0) return Band::FarRed;
    return Band::Excluded;
}

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& X;
    const std::vector<double>& y;
    const EtRegressorConfig& cfg;
    Rng rng;
    std::vector<ExtraTreesRegressor::Node> nodes;
    std::vector<int> idx;  // row indices, partitioned in place during the build

    TreeBuilder(const std::vector<std::vector<double>>& X_, const std::vector<double>& y_,
                const EtRegressorConfig& cfg_, uint64_t seed)
        : X(X_), y(y_), cfg(cfg_), rng(seed) {
        idx.resize(X.size());
        std::iota(idx.begin(), idx.end(), 0);
    }

    int build(int lo, int hi) {
        const int n = hi - lo;
        double sum = 0.0, sumsq = 0.0;
        for (int i = lo; i < hi; ++i) {
            sum += y[idx[i]];
            sumsq += y[idx[i]] * y[idx[i]];
        }
        const double mean = sum / n;
        const double sse = sumsq - sum * mean;

        const int me = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[me].value = mean;
        if (n < cfg.min_samples_split || sse <= 0.0) return me;

        const int p = static_cast<int>(X[0].size());
        int k = cfg.candidate_features_per_split;
        if (k <= 0 || k > p) k = p;

        // candidate features: all of them when k == p, otherwise a k-subset
        std::vector<int> features(p);
        std::iota(features.begin(), features.end(), 0);
        if (k < p) {
            for (int i = 0; i < k; ++i) {
                const size_t j = i + rng.next_below(p - i);
                std::swap(features[i], features[j]);
            }
            features.resize(k);
        }

        int best_f = -1;
        double best_thr = 0.0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int f : features) {
            double lo_v = std::numeric_limits<double>::infinity();
            double hi_v = -std::numeric_limits<double>::infinity();
            for (int i = lo; i < hi; ++i) {
                lo_v = std::min(lo_v, X[idx[i]][f]);
                hi_v = std::max(hi_v, X[idx[i]][f]);
            }
            if (!(hi_v > lo_v)) continue;  // constant within the node
            const double thr = lo_v + rng.next_open_unit() * (hi_v - lo_v);

            double lsum = 0.0, lsq = 0.0;
            int ln = 0;
            double rsum = 0.0, rsq = 0.0;
            int rn = 0;
            for (int i = lo; i < hi; ++i) {
                const double v = y[idx[i]];
                if (X[idx[i]][f] < thr) {
                    lsum += v;
                    lsq += v * v;
                    ++ln;
                } else {
                    rsum += v;
                    rsq += v * v;
                    ++rn;
                }
            }
            if (ln == 0 || rn == 0) continue;  // degenerate draw at a range edge
            const double child_sse = (lsq - lsum * lsum / ln) + (rsq - rsum * rsum / rn);
            const double score = sse - child_sse;  // variance reduction * n
            if (score > best_score) {
                best_score = score;
                best_f = f;
                best_thr = thr;
            }
        }
        if (best_f < 0) return me;  // every candidate feature constant

        auto mid_it = std::partition(idx.begin() + lo, idx.begin() + hi,
                                     [&](int i) { return X[i][best_f] < best_thr; });
        const int mid = static_cast<int>(mid_it - idx.begin());
        nodes[me].feature = best_f;
        nodes[me].threshold = best_thr;
        const int l = build(lo, mid);
        nodes[me].left = l;
        const int r = build(mid, hi);
        nodes[me].right = r;
        return me;
    }
};

}  // namespace

void ExtraTreesRegressor::fit(const std::vector<std::vector<double>>& X,
                              const std::vector<double>& y, const EtRegressorConfig& cfg) {
    if (X.empty() || X.size() != y.size()) throw InsufficientBandData("empty or mismatched training data");
    cfg_ = cfg;
    trees_.clear();
    trees_.resize(cfg.n_trees);
    for (int t = 0; t < cfg.n_trees; ++t) {
        TreeBuilder b(X, y, cfg, cfg.rng_seed ^ static_cast<uint64_t>(t));
        b.build(0, static_cast<int>(X.size()));
        trees_[t].nodes = std::move(b.nodes);
    }
}

double ExtraTreesRegressor::predict_row(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) {
        int at = 0;
        while (tree.nodes[at].feature >= 0) {
            const auto& nd = tree.nodes[at];
            at = x[nd.feature] < nd.threshold ? nd.left : nd.right;
        }
        sum += tree.nodes[at].value;
    }
    return sum / static_cast<double>(trees_.size());
}

std::string ExtraTreesRegressor::to_json() const {
    nlohmann::json j;
    j["n_trees"] = cfg_.n_trees;
    j["candidate_features_per_split"] = cfg_.candidate_features_per_split;
    j["min_samples_split"] = cfg_.min_samples_split;
    j["rng_seed"] = cfg_.rng_seed;
    auto& trees = j["trees"] = nlohmann::json::array();
    for (const auto& t : trees_) {
        nlohmann::json jt = nlohmann::json::array();
        for (const auto& nd : t.nodes) {
            jt.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
        }
        trees.push_back(std::move(jt));
    }
    return j.dump();
}

ExtraTreesRegressor ExtraTreesRegressor::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExtraTreesRegressor m;
    m.cfg_.n_trees = j.at("n_trees").get<int>();
    m.cfg_.candidate_features_per_split = j.at("candidate_features_per_split").get<int>();
    m.cfg_.min_samples_split = j.at("min_samples_split").get<int>();
    m.cfg_.rng_seed = j.at("rng_seed").get<uint64_t>();
    for (const auto& jt : j.at("trees")) {
        Tree t;
        for (const auto& jn : jt) {
            Node nd;
            nd.feature = jn.at(0).get<int>();
            nd.threshold = jn.at(1).get<double>();
            nd.left = jn.at(2).get<int>();
            nd.right = jn.at(3).get<int>();
            nd.value = jn.at(4).get<double>();
            t.nodes.push_back(nd);
        }
        m.trees_.push_back(std::move(t));
    }
    return m;
}

namespace {

double abs_pearson_or_zero(const std::vector<std::vector<double>>& X, int col,
                           const std::vector<double>& y) {
    const size_t n = X.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += X[i][col];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = X[i][col] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;  // zero-variance convention
    return std::abs(sxy / std::sqrt(sxx * syy));
}

}  // namespace

std::vector<std::string> select_features(const std::vector<std::vector<double>>& X,
                                         const std::vector<std::string>& columns,
                                         const std::vector<double>& y, int k) {
    struct Scored {
        double rho;
        const std::string* name;
        int col;
    };
    std::vector<Scored> scored;
    for (size_t c = 0; c < columns.size(); ++c) {
        double lo = X[0][c], hi = X[0][c];
        for (const auto& row : X) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
        if (!(hi > lo)) continue;  // constant columns never enter the ranking
        scored.push_back({abs_pearson_or_zero(X, static_cast<int>(c), y), &columns[c],
                          static_cast<int>(c)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.rho != b.rho) return a.rho > b.rho;
        return *a.name < *b.name;
    });
    if (static_cast<int>(scored.size()) > k) scored.resize(k);
    std::vector<std::string> out;
    for (const auto& s : scored) out.push_back(*s.name);
    return out;
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * (static_cast<double>(v.size()) - 1.0);
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - std::floor(h)) * (v[lo + 1] - v[lo]);
}

BandModel fit_band(const std::vector<std::vector<double>>& X,
                   const std::vector<std::string>& columns, const std::vector<double>& y, Band band,
                   const EtRegressorConfig& cfg, int top_k) {
    if (X.size() < 3) {
        throw InsufficientBandData(std::string(band_name(band)) + ": " + std::to_string(X.size()) +
                                   " training rows");
    }
    BandModel m;
    m.band = band;
    m.selected = select_features(X, columns, y, top_k);
    if (m.selected.empty()) throw InsufficientBandData(std::string(band_name(band)) + ": all columns constant");
    for (const auto& name : m.selected) {
        const auto it = std::find(columns.begin(), columns.end(), name);
        m.selected_idx.push_back(static_cast<int>(it - columns.begin()));
    }

    std::vector<std::vector<double>> sub(X.size());
    for (size_t i = 0; i < X.size(); ++i) {
        sub[i].reserve(m.selected_idx.size());
        for (int c : m.selected_idx) sub[i].push_back(X[i][c]);
    }
    m.forest.fit(sub, y, cfg);
    m.train_q90 = quantile(y, 0.90);
    m.train_q10 = quantile(y, 0.10);
    return m;
}

double predict(const std::map<Band, BandModel>& models, std::span<const double> row, double em) {
    const Band b = assign_band(em);
    const auto it = models.find(b);
    if (b == Band::Excluded || it == models.end()) {
        throw NoModelForBand(std::string("no model for band ") + band_name(b));
    }
    const BandModel& m = it->second;
    std::vector<double> sub;
    sub.reserve(m.selected_idx.size());
    for (int c : m.selected_idx) sub.push_back(row[c]);
    const double raw = m.forest.predict_row(sub);
    return std::clamp(raw, 0.0, 1.0);
}

std::string band_model_to_json(const BandModel& m) {
    nlohmann::json j;
    j["band"] = band_name(m.band);
    j["selected"] = m.selected;
    j["selected_idx"] = m.selected_idx;
    j["train_q90"] = m.train_q90;
    j["train_q10"] = m.train_q10;
    j["forest"] = nlohmann::json::parse(m.forest.to_json());
    return j.dump();
}

BandModel band_model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BandModel m;
    const std::string b = j.at("band").get<std::string>();
    for (Band cand : {Band::GFP_like, Band::Red, Band::FarRed, Band::Excluded}) {
        if (b == band_name(cand)) m.band = cand;
    }
    m.selected = j.at("selected").get<std::vector<std::string>>();
    m.selected_idx = j.at("selected_idx").get<std::vector<int>>();
    m.train_q90 = j.at("train_q90").get<double>();
    m.train_q10 = j.at("train_q10").get<double>();
    m.forest = ExtraTreesRegressor::from_json(j.at("forest").dump());
    return m;
}

}  // namespace fpmech
