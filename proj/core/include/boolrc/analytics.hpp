#pragma once

#include <cstdint>
#include <vector>

#include "boolrc/learner.hpp"

namespace boolrc::analytics {

using learner::BooleanWeights;
using learner::EvalContext;

enum class ExplorationMode { markovian, greedy };

// Analytic Hamming-distance predictor parameters. C is the probability that
// noise flips a reward relative to the systematic gradient; the divergence
// per epoch is driven by C_tilde = 2C(1-C).
struct RateModelParams {
    double c = 0.0;
    double c_tilde = 0.0;
    int n = 0;
    ExplorationMode mode = ExplorationMode::markovian;
};

struct HammingTrace {
    std::vector<double> h;  // real-valued model trace, index 0 = k = 1
    int n = 0;
};

struct RateModelFit {
    RateModelParams params;
    double r_squared = 0.0;
    bool degenerate = false;
};

struct SensitivityReport {
    double eps_dot = 0.0;   // error response per unit raw-output perturbation
    double sigma_l = 0.0;   // std of raw-output change from a random bit flip
    double sigma_n = 0.0;
    double eps_at_k = 0.0;
    int k = 0;
};

enum class Category { below_noise, potentially_independent, dependent };

struct GradientPair {
    double grad_a = 0.0;
    double grad_b = 0.0;
};

struct DimensionClassification {
    std::vector<Category> categories;
    int below_noise = 0;
    int potentially_independent = 0;
    int dependent = 0;
};

struct ExponentialFit {
    double eps0 = 0.0;
    double rate = 0.0;  // eps(k) = eps0 * exp(-rate * k)
    double r_squared = 0.0;
    bool truncated = false;  // nonpositive values were dropped before fitting
};

struct MinimaStats {
    std::vector<int> distances;  // all pairwise Hamming distances
    double mean = 0.0;
    double std = 0.0;            // Gaussian fit by sample moments
    double mean_abs_bit_correlation = 0.0;
};

int hamming(const BooleanWeights& a, const BooleanWeights& b);

// Iterates the divergence recursion H(k+1) = H(k) + C_tilde * (1 - 2*rho(k)).
// Markovian: rho(k) = H(k)/N every epoch. Greedy: rho is frozen per block of
// N epochs at H(aN)/N, giving piecewise-linear segments (blocks anchored at
// k=1, so block a spans k in [aN+1, (a+1)N]).
HammingTrace predict_hamming(const RateModelParams& params, double h1, int epochs);

// Least-squares fit of C_tilde to an averaged observed trace; C recovered as
// the root of 2C(1-C) = C_tilde in [0, 0.5].
RateModelFit fit_rate_model(const std::vector<std::vector<double>>& observed,
                            ExplorationMode mode, int n);

// Repeated noisy evaluation of one flip; returns the fraction of evaluations
// whose reward sign differs from the systematic (noise-free) sign.
double estimate_flip_probability(const EvalContext& ctx, const BooleanWeights& weights,
                                 int l, int reps, std::uint64_t probe_seed);

// eps_dot by RMS finite differences: seeded perturbation patterns injected
// into the raw output, with the full normalize-then-error pipeline on top.
// sigma_l is the pooled std of raw-output changes over random single flips.
SensitivityReport noise_sensitivity(const EvalContext& ctx, const BooleanWeights& weights,
                                    int reps, std::uint64_t probe_seed,
                                    double delta_scale = 1e-3);

ExponentialFit fit_exponential(const std::vector<double>& eps_trace);

MinimaStats pairwise_minima_stats(const std::vector<BooleanWeights>& minima);

// below_noise inside the circle of diameter noise_scale around the origin;
// potentially independent inside the band |grad_a - grad_b| <= noise_scale
// around the diagonal; dependent otherwise.
DimensionClassification classify_gradient_pairs(const std::vector<GradientPair>& probes,
                                                double noise_scale);

}  // namespace boolrc::analytics
