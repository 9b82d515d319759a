#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fpmech/metadata.hpp"

namespace fpmech {

// |K5(a) n K5(b)| / |K5(a) u K5(b)| over unique contiguous 5-mer sets.
double kmer_jaccard(std::string_view a, std::string_view b);

enum class Bucket { B70_85, B50_70, Blt50 };
const char* bucket_name(Bucket b);
Bucket bucket_of(double m);  // half-open intervals: 0.70<=m<0.85, 0.50<=m<0.70, m<0.50

struct SplitPlan {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::map<std::string, double> m;       // test id -> max 5-mer Jaccard to the train set
    std::map<std::string, Bucket> bucket;  // test id -> difficulty bucket
};

// Fixed homology-controlled split: an id joins the train set iff it has a
// 5-mer neighbour with similarity >= tau anywhere in the benchmark; brute
// force over all pairs (label-free, sequence-only).
SplitPlan homology_split(const std::vector<ProteinRecord>& records, double tau = 0.85);

struct FoldPlan {
    uint64_t seed = 0;
    int q_bins = 0;
    std::map<std::string, int> fold_of;  // id -> fold in [0, n_folds)
};

// Quantile-bin stratified folds: Q = min(5, floor(n/5)) bins over y with
// stable index tie-break, then a seeded shuffle per bin dealt round-robin.
FoldPlan make_folds(const std::vector<std::string>& ids, const std::vector<double>& y,
                    uint64_t seed, int n_folds = 5);

}  // namespace fpmech
