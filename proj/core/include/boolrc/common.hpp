#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace boolrc {

// Error taxonomy. ConfigError maps to CLI exit code 1, everything else to 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizingError : ConfigError {
    using ConfigError::ConfigError;
};
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -------------------------------------------------------------------------
// Seeding. Every random stream in the project is derived from one master
// seed through a counter-based scheme: mixing in a stream name and an index
// means adding new streams never perturbs existing ones.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a(stream)) + index);
}

// Counter-based Gaussian stream: the value at (seed, epoch, n) is a pure
// function of its key, so concurrent evaluations never share RNG state.
double keyed_gaussian(std::uint64_t seed, std::uint64_t epoch, std::uint64_t n);

// Uniform doubles in [0,1) from a keyed counter.
double keyed_uniform(std::uint64_t seed, std::uint64_t counter);

double mean(const std::vector<double>& v);
// Population standard deviation.
double stddev(const std::vector<double>& v);
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace boolrc
