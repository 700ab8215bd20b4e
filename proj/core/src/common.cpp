#include "boolrc/common.hpp"

#include <cmath>
#include <numbers>

namespace boolrc {

double keyed_uniform(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x1234567890abcdefULL));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double keyed_gaussian(std::uint64_t seed, std::uint64_t epoch, std::uint64_t n) {
    std::uint64_t key = splitmix64(seed ^ splitmix64(epoch * 0x9e3779b97f4a7c15ULL + n));
    std::uint64_t b1 = splitmix64(key);
    std::uint64_t b2 = splitmix64(key ^ 0xda442d24d1ce3f6bULL);
    double u1 = (static_cast<double>(b1 >> 11) + 0.5) * 0x1.0p-53;  // in (0,1)
    double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("pearson: length mismatch");
    if (a.size() < 2) throw DimensionError("pearson: need at least 2 samples");
    double ma = mean(a);
    double mb = mean(b);
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) throw DegenerateError("pearson: zero variance");
    return num / std::sqrt(va * vb);
}

}  // namespace boolrc
