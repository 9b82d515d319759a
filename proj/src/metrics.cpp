#include "fpmech/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpmech/errors.hpp"

namespace fpmech {

RegMetrics pearson_mae_compression(std::span<const double> y, std::span<const double> yhat) {
    const size_t n = y.size();
    if (n < 2 || yhat.size() != n) throw DegenerateTarget("need n >= 2 matched samples");

    double my = 0.0, mp = 0.0;
    for (size_t i = 0; i < n; ++i) {
        my += y[i];
        mp += yhat[i];
    }
    my /= n;
    mp /= n;

    double syy = 0.0, spp = 0.0, syp = 0.0, abs_err = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dy = y[i] - my;
        const double dp = yhat[i] - mp;
        syy += dy * dy;
        spp += dp * dp;
        syp += dy * dp;
        abs_err += std::abs(yhat[i] - y[i]);
    }
    if (syy <= 0.0) throw DegenerateTarget("sd(y) == 0");

    RegMetrics m;
    m.n = static_cast<int>(n);
    m.mae = abs_err / n;
    m.compression = std::sqrt(spp / n) / std::sqrt(syy / n);
    if (spp <= 0.0) {
        m.pearson_r = 0.0;  // collapse to the mean: flagged, reported as 0
        m.r_defined = false;
    } else {
        m.pearson_r = syp / std::sqrt(syy * spp);
    }
    return m;
}

std::pair<double, double> topk_precision_labeled(std::span<const char> bright,
                                                 std::span<const char> dark,
                                                 std::span<const double> yhat, int k) {
    const size_t n = yhat.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<int> by_desc = order;
    std::stable_sort(by_desc.begin(), by_desc.end(),
                     [&](int a, int b) { return yhat[a] > yhat[b]; });
    std::vector<int> by_asc = order;
    std::stable_sort(by_asc.begin(), by_asc.end(), [&](int a, int b) { return yhat[a] < yhat[b]; });

    double bright_hits = 0.0, dark_hits = 0.0;
    for (int i = 0; i < k; ++i) {
        bright_hits += bright[by_desc[i]];
        dark_hits += dark[by_asc[i]];
    }
    return {bright_hits / k, dark_hits / k};
}

std::pair<double, double> topk_metrics(std::span<const double> y, std::span<const double> yhat,
                                       double q90, double q10, int k) {
    const size_t n = y.size();
    std::vector<char> bright(n), dark(n);
    for (size_t i = 0; i < n; ++i) {
        bright[i] = y[i] >= q90 ? 1 : 0;
        dark[i] = y[i] <= q10 ? 1 : 0;
    }
    return topk_precision_labeled(bright, dark, yhat, k);
}

}  // namespace fpmech
