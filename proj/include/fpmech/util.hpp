#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fpmech {

// FNV-1a, used for content hashes recorded in output sidecars.
inline uint64_t fnv1a64(std::string_view data, uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(uint64_t v);

// Shortest round-trip formatting for doubles; every table we emit uses this
// so that parse(format(x)) == x and reruns are byte-identical.
std::string fmt_double(double v);
double parse_double(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

// Deterministic RNG. The mt19937_64 engine output is pinned by the standard;
// the std:: distributions are not, so all draws are derived here by hand.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0,1)
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0,1)
    double next_open_unit() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // unbiased uniform integer in [0, n)
    size_t next_below(size_t n) {
        if (n == 0) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return static_cast<size_t>(v % n);
    }

    // standard normal via Box-Muller; two uniforms per draw, no cached spare
    double next_gauss() {
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

// Stable stream seed from string parts, used so that every (seed, fold, band,
// condition) cell owns its own RNG stream.
uint64_t derive_seed(const std::vector<std::string>& parts);

}  // namespace fpmech
