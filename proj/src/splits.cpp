#include "fpmech/splits.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fpmech/errors.hpp"
#include "fpmech/util.hpp"

namespace fpmech {

namespace {

std::set<std::string> kmer_set(std::string_view s) {
    if (s.size() < 5) throw SequenceTooShort("sequence shorter than 5");
    std::set<std::string> out;
    for (size_t i = 0; i + 5 <= s.size(); ++i) out.insert(std::string(s.substr(i, 5)));
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    size_t inter = 0;
    for (const auto& k : a) inter += b.count(k);
    const size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double kmer_jaccard(std::string_view a, std::string_view b) {
    return jaccard(kmer_set(a), kmer_set(b));
}

const char* bucket_name(Bucket b) {
    switch (b) {
        case Bucket::B70_85: return "70-85";
        case Bucket::B50_70: return "50-70";
        case Bucket::Blt50: return "<50";
    }
    return "?";
}

Bucket bucket_of(double m) {
    if (m >= 0.70 && m < 0.85) return Bucket::B70_85;
    if (m >= 0.50 && m < 0.70) return Bucket::B50_70;
    return Bucket::Blt50;
}

SplitPlan homology_split(const std::vector<ProteinRecord>& records, double tau) {
    const size_t n = records.size();
    if (n < 2) throw TooFewSamples("homology split needs at least 2 records");

    std::vector<std::set<std::string>> kmers(n);
    for (size_t i = 0; i < n; ++i) kmers[i] = kmer_set(records[i].sequence);

    // max similarity to any other protein in the complete benchmark
    std::vector<double> max_any(n, 0.0);
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double J = jaccard(kmers[i], kmers[j]);
            sim[i][j] = sim[j][i] = J;
            max_any[i] = std::max(max_any[i], J);
            max_any[j] = std::max(max_any[j], J);
        }
    }

    SplitPlan plan;
    std::vector<size_t> train_rows;
    for (size_t i = 0; i < n; ++i) {
        if (max_any[i] >= tau) {
            plan.train_ids.push_back(records[i].id);
            train_rows.push_back(i);
        } else {
            plan.test_ids.push_back(records[i].id);
        }
    }
    for (size_t i = 0; i < n; ++i) {
        if (max_any[i] >= tau) continue;
        double m = 0.0;  // empty train set reads as similarity 0
        for (size_t j : train_rows) m = std::max(m, sim[i][j]);
        plan.m[records[i].id] = m;
        plan.bucket[records[i].id] = bucket_of(m);
    }
    return plan;
}

FoldPlan make_folds(const std::vector<std::string>& ids, const std::vector<double>& y,
                    uint64_t seed, int n_folds) {
    const size_t n = ids.size();
    if (n < 10 || y.size() != n) throw TooFewSamples("make_folds needs n >= 10 matched samples");

    FoldPlan plan;
    plan.seed = seed;
    const int q = std::min<int>(5, static_cast<int>(n / 5));
    plan.q_bins = q;

    // qcut with stable index tie-break: rank by (y, index), then equal-count bins
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return y[a] < y[b]; });

    std::vector<std::vector<size_t>> bins(q);
    for (size_t rank = 0; rank < n; ++rank) {
        const int b = std::min<int>(q - 1, static_cast<int>(rank * q / n));
        bins[b].push_back(order[rank]);
    }

    Rng rng(seed);
    for (int b = 0; b < q; ++b) {
        rng.shuffle(bins[b]);
        for (size_t pos = 0; pos < bins[b].size(); ++pos) {
            // rotate the dealing start per bin so overall fold sizes stay even
            plan.fold_of[ids[bins[b][pos]]] = static_cast<int>((pos + b) % n_folds);
        }
    }
    return plan;
}

}  // namespace fpmech
