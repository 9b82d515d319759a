#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace fpmech {

struct RegMetrics {
    double pearson_r = 0.0;
    bool r_defined = true;  // false when sd(yhat) == 0 (collapse to the mean)
    double mae = 0.0;
    double compression = 0.0;  // sd(yhat) / sd(y), population sd
    int n = 0;
};

// Sample Pearson correlation, mean absolute error and prediction compression.
// Throws DegenerateTarget when n < 2 or sd(y) == 0. A constant prediction is
// reported as r = 0 with r_defined = false, compression = 0.
RegMetrics pearson_mae_compression(std::span<const double> y, std::span<const double> yhat);

// Bright/dark precision at K with per-row bright/dark labels. Ties in yhat
// break by the stable input order.
std::pair<double, double> topk_precision_labeled(std::span<const char> bright,
                                                 std::span<const char> dark,
                                                 std::span<const double> yhat, int k);

// Scalar-threshold form: B_i = [y_i >= q90], D_i = [y_i <= q10].
std::pair<double, double> topk_metrics(std::span<const double> y, std::span<const double> yhat,
                                       double q90, double q10, int k);

}  // namespace fpmech
