#include <doctest.h>

#include <cmath>

#include "fpmech/errors.hpp"
#include "fpmech/metrics.hpp"
#include "fpmech/util.hpp"

using namespace fpmech;

namespace {

// textbook single-pass formulas, independent of the library's two-pass route
struct Oracle {
    double r, mae, c;
};

Oracle textbook(const std::vector<double>& y, const std::vector<double>& p) {
    const double n = double(y.size());
    double sy = 0, sp = 0, syy = 0, spp = 0, syp = 0, ae = 0;
    for (size_t i = 0; i < y.size(); ++i) {
        sy += y[i];
        sp += p[i];
        syy += y[i] * y[i];
        spp += p[i] * p[i];
        syp += y[i] * p[i];
        ae += std::fabs(y[i] - p[i]);
    }
    Oracle o;
    o.r = (n * syp - sy * sp) / (std::sqrt(n * syy - sy * sy) * std::sqrt(n * spp - sp * sp));
    o.mae = ae / n;
    o.c = std::sqrt(spp / n - (sp / n) * (sp / n)) / std::sqrt(syy / n - (sy / n) * (sy / n));
    return o;
}

// O(n^2) counting oracle with the stable-order tie rule
std::pair<double, double> brute_topk(const std::vector<double>& y, const std::vector<double>& p,
                                     double q90, double q10, int k) {
    const int n = int(y.size());
    double bright = 0, dark = 0;
    for (int i = 0; i < n; ++i) {
        int above = 0, below = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (p[j] > p[i] || (p[j] == p[i] && j < i)) ++above;
            if (p[j] < p[i] || (p[j] == p[i] && j < i)) ++below;
        }
        if (above < k && y[i] >= q90) bright += 1;
        if (below < k && y[i] <= q10) dark += 1;
    }
    return {bright / k, dark / k};
}

}  // namespace

TEST_CASE("identity prediction gives R=1, MAE=0, C=1") {
    const std::vector<double> y = {0.1, 0.4, 0.9, 0.3};
    const RegMetrics m = pearson_mae_compression(y, y);
    CHECK(m.pearson_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mae == 0.0);
    CHECK(m.compression == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r_defined);
}

TEST_CASE("constant prediction collapses with a flag") {
    const std::vector<double> y = {0.1, 0.4, 0.9};
    const std::vector<double> p = {0.5, 0.5, 0.5};
    const RegMetrics m = pearson_mae_compression(y, p);
    CHECK_FALSE(m.r_defined);
    CHECK(m.pearson_r == 0.0);
    CHECK(m.compression == 0.0);
}

TEST_CASE("degenerate target throws") {
    const std::vector<double> y = {0.5, 0.5, 0.5};
    const std::vector<double> p = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(pearson_mae_compression(y, p), DegenerateTarget);
    CHECK_THROWS_AS(pearson_mae_compression(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    DegenerateTarget);
}

TEST_CASE("metrics match the textbook formulas to 1e-12") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng.next_below(98));
        std::vector<double> y(n), p(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.next_gauss();
            p[i] = rng.next_gauss();
        }
        const RegMetrics m = pearson_mae_compression(y, p);
        const Oracle o = textbook(y, p);
        CHECK(std::abs(m.pearson_r - o.r) < 1e-12);
        CHECK(std::abs(m.mae - o.mae) < 1e-12);
        CHECK(std::abs(m.compression - o.c) < 1e-12);
    }
}

TEST_CASE("hand-enumerated top-K example") {
    const std::vector<double> y = {0.1, 0.2, 0.8, 0.9};
    const std::vector<double> p = {0.9, 0.1, 0.2, 0.8};
    const auto [bright, dark] = topk_metrics(y, p, 0.85, 0.15, 2);
    // TopK+ by prediction: ids 0 (.9) and 3 (.8); bright truth = {0, 1}
    CHECK(bright == doctest::Approx(0.5));
    // TopK- by prediction: ids 1 (.1) and 2 (.2); y = .2 and .8, neither dark
    CHECK(dark == doctest::Approx(0.0));
}

TEST_CASE("perfect predictor fills bright precision") {
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) y.push_back(i / 19.0);
    const double q90 = 0.9, q10 = 0.1;
    const auto [bright, dark] = topk_metrics(y, y, q90, q10, 2);
    CHECK(bright == doctest::Approx(1.0));
    CHECK(dark == doctest::Approx(1.0));
}

TEST_CASE("top-K agrees with exhaustive enumeration on every n <= 12") {
    Rng rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + int(rng.next_below(11));
        std::vector<double> y(n), p(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.next_below(5) / 4.0;  // heavy ties
            p[i] = rng.next_below(4) / 3.0;
        }
        const double q90 = 0.75, q10 = 0.25;
        for (int k = 1; k <= n; ++k) {
            const auto got = topk_metrics(y, p, q90, q10, k);
            const auto want = brute_topk(y, p, q90, q10, k);
            CHECK(got.first == doctest::Approx(want.first).epsilon(1e-15));
            CHECK(got.second == doctest::Approx(want.second).epsilon(1e-15));
        }
    }
}

TEST_CASE("anti-correlated predictor matches brute force") {
    std::vector<double> y, p;
    Rng rng(3);
    for (int i = 0; i < 12; ++i) {
        y.push_back(i / 11.0);
        p.push_back(1.0 - i / 11.0);
    }
    const auto got = topk_metrics(y, p, 0.9, 0.1, 3);
    const auto want = brute_topk(y, p, 0.9, 0.1, 3);
    CHECK(got.first == want.first);
    CHECK(got.second == want.second);
}
