#include "boolrc/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace boolrc::analytics {

int hamming(const BooleanWeights& a, const BooleanWeights& b) {
    if (a.size() != b.size()) throw DimensionError("hamming: length mismatch");
    int h = 0;
    for (std::size_t i = 0; i < a.size(); ++i) h += (a[i] != b[i]);
    return h;
}

HammingTrace predict_hamming(const RateModelParams& params, double h1, int epochs) {
    if (params.n <= 0) throw ConfigError("predict_hamming: N must be positive");
    if (h1 < 0.0 || h1 > params.n)
        throw ConfigError("predict_hamming: H1 outside [0, N]");
    HammingTrace trace;
    trace.n = params.n;
    trace.h.reserve(static_cast<std::size_t>(epochs));
    double h = h1;
    double rho_frozen = h1 / params.n;
    for (int k = 1; k <= epochs; ++k) {
        trace.h.push_back(h);
        double rho;
        if (params.mode == ExplorationMode::markovian) {
            rho = h / params.n;
        } else {
            // Block a spans k in [aN+1, (a+1)N]; rho frozen at block entry.
            if ((k - 1) % params.n == 0) rho_frozen = h / params.n;
            rho = rho_frozen;
        }
        h += params.c_tilde * (1.0 - 2.0 * rho);
    }
    return trace;
}

namespace {

double rate_model_sse(double c_tilde, const std::vector<double>& avg,
                      ExplorationMode mode, int n) {
    RateModelParams p;
    p.c_tilde = c_tilde;
    p.n = n;
    p.mode = mode;
    const auto pred = predict_hamming(p, avg.front(), static_cast<int>(avg.size()));
    double sse = 0.0;
    for (std::size_t i = 0; i < avg.size(); ++i) {
        const double d = pred.h[i] - avg[i];
        sse += d * d;
    }
    return sse;
}

}  // namespace

RateModelFit fit_rate_model(const std::vector<std::vector<double>>& observed,
                            ExplorationMode mode, int n) {
    if (observed.empty()) throw ConfigError("fit_rate_model: no traces");
    const std::size_t len = observed.front().size();
    if (len < 2) throw ConfigError("fit_rate_model: traces too short");
    for (const auto& t : observed)
        if (t.size() != len) throw DimensionError("fit_rate_model: ragged traces");

    std::vector<double> avg(len, 0.0);
    for (const auto& t : observed)
        for (std::size_t i = 0; i < len; ++i) avg[i] += t[i];
    for (auto& v : avg) v /= static_cast<double>(observed.size());

    // Golden-section search over C_tilde in [0, 0.5].
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 0.5;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = rate_model_sse(x1, avg, mode, n);
    double f2 = rate_model_sse(x2, avg, mode, n);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = rate_model_sse(x1, avg, mode, n);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = rate_model_sse(x2, avg, mode, n);
        }
    }
    const double c_tilde = (x1 + x2) / 2.0;
    const double sse = rate_model_sse(c_tilde, avg, mode, n);

    const double m = mean(avg);
    double sstot = 0.0;
    for (double v : avg) sstot += (v - m) * (v - m);

    RateModelFit fit;
    fit.params.c_tilde = c_tilde;
    // Root of 2C(1-C) = c_tilde in [0, 0.5].
    fit.params.c = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 2.0 * c_tilde)));
    fit.params.n = n;
    fit.params.mode = mode;
    fit.degenerate = sstot == 0.0;
    fit.r_squared = fit.degenerate ? 0.0 : 1.0 - sse / sstot;
    return fit;
}

double estimate_flip_probability(const EvalContext& ctx, const BooleanWeights& weights,
                                 int l, int reps, std::uint64_t probe_seed) {
    if (reps < 100) throw ConfigError("estimate_flip_probability: reps must be >= 100");
    const auto flipped = learner::mutate(weights, l);

    EvalContext noise_free = ctx;
    noise_free.noise.sigma_out = 0.0;
    const double systematic = learner::evaluate_full(noise_free, flipped, 0) -
                              learner::evaluate_full(noise_free, weights, 0);

    if (ctx.noise.sigma_out == 0.0) return 0.0;

    EvalContext probe = ctx;
    probe.noise.noise_seed = probe_seed;
    int positive = 0;
    std::vector<double> deltas(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const double d =
            learner::evaluate_full(probe, flipped, static_cast<std::uint64_t>(2 * i)) -
            learner::evaluate_full(probe, weights, static_cast<std::uint64_t>(2 * i + 1));
        deltas[static_cast<std::size_t>(i)] = d;
        if (d >= 0.0) ++positive;
    }
    // Zero systematic gradient: the sign is purely noise-driven; measure
    // disagreement against the majority.
    const bool reference_positive =
        systematic != 0.0 ? systematic >= 0.0 : positive * 2 >= reps;
    int disagree = 0;
    for (double d : deltas)
        if ((d >= 0.0) != reference_positive) ++disagree;
    return static_cast<double>(disagree) / reps;
}

SensitivityReport noise_sensitivity(const EvalContext& ctx, const BooleanWeights& weights,
                                    int reps, std::uint64_t probe_seed,
                                    double delta_scale) {
    if (reps < 100) throw ConfigError("noise_sensitivity: reps must be >= 100");
    reservoir::NoiseParams quiet{0.0, 0};
    const auto y = reservoir::readout(*ctx.states, weights, quiet, 0);
    const double y_scale = stddev(y);
    if (y_scale <= 0.0) throw DegenerateError("noise_sensitivity: degenerate output");
    const double eps_base =
        learner::evaluate_error(reservoir::normalize_output(y), ctx.target);
    const double delta = delta_scale * y_scale;

    // RMS directional derivative over seeded Gaussian perturbation patterns.
    double acc = 0.0;
    std::vector<double> perturbed(y.size());
    for (int i = 0; i < reps; ++i) {
        for (std::size_t r = 0; r < y.size(); ++r)
            perturbed[r] = y[r] + delta * keyed_gaussian(probe_seed, static_cast<std::uint64_t>(i), r);
        const double eps =
            learner::evaluate_error(reservoir::normalize_output(perturbed), ctx.target);
        const double d = (eps - eps_base) / delta;
        acc += d * d;
    }

    // sigma_l: pooled std of raw-output changes over random single flips.
    std::vector<double> pooled;
    pooled.reserve(y.size() * static_cast<std::size_t>(reps));
    const int n = ctx.states->cols();
    for (int i = 0; i < reps; ++i) {
        const int l = static_cast<int>(
            keyed_uniform(probe_seed ^ 0x5bf03635ULL, static_cast<std::uint64_t>(i)) * n);
        const auto y_flip =
            reservoir::readout(*ctx.states, learner::mutate(weights, std::min(l, n - 1)), quiet, 0);
        for (std::size_t r = 0; r < y.size(); ++r) pooled.push_back(y_flip[r] - y[r]);
    }

    SensitivityReport rep;
    rep.eps_dot = std::sqrt(acc / reps);
    rep.sigma_l = stddev(pooled);
    rep.sigma_n = ctx.noise.sigma_out;
    rep.eps_at_k = eps_base;
    return rep;
}

ExponentialFit fit_exponential(const std::vector<double>& eps_trace) {
    std::vector<double> ks, logs;
    bool truncated = false;
    for (std::size_t i = 0; i < eps_trace.size(); ++i) {
        if (eps_trace[i] > 0.0) {
            ks.push_back(static_cast<double>(i));
            logs.push_back(std::log(eps_trace[i]));
        } else {
            truncated = true;
        }
    }
    if (ks.size() < 2) throw DegenerateError("fit_exponential: too few positive values");

    const double mk = mean(ks);
    const double ml = mean(logs);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sxx += (ks[i] - mk) * (ks[i] - mk);
        sxy += (ks[i] - mk) * (logs[i] - ml);
        syy += (logs[i] - ml) * (logs[i] - ml);
    }
    const double slope = sxy / sxx;

    ExponentialFit fit;
    fit.rate = -slope;
    fit.eps0 = std::exp(ml - slope * mk);
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.truncated = truncated;
    return fit;
}

MinimaStats pairwise_minima_stats(const std::vector<BooleanWeights>& minima) {
    if (minima.size() < 2)
        throw ConfigError("pairwise_minima_stats: need at least 2 minima");
    MinimaStats stats;
    std::vector<double> dist_d;
    std::vector<double> correlations;
    for (std::size_t a = 0; a < minima.size(); ++a) {
        for (std::size_t b = a + 1; b < minima.size(); ++b) {
            const int h = hamming(minima[a], minima[b]);
            stats.distances.push_back(h);
            dist_d.push_back(static_cast<double>(h));
            std::vector<double> va(minima[a].begin(), minima[a].end());
            std::vector<double> vb(minima[b].begin(), minima[b].end());
            try {
                correlations.push_back(std::abs(pearson(va, vb)));
            } catch (const DegenerateError&) {
                // constant weight vector; no defined correlation for this pair
            }
        }
    }
    stats.mean = mean(dist_d);
    stats.std = stddev(dist_d);
    stats.mean_abs_bit_correlation = correlations.empty() ? 0.0 : mean(correlations);
    return stats;
}

DimensionClassification classify_gradient_pairs(const std::vector<GradientPair>& probes,
                                                double noise_scale) {
    if (noise_scale <= 0.0)
        throw ConfigError("classify_gradient_pairs: noise_scale must be positive");
    DimensionClassification out;
    out.categories.reserve(probes.size());
    for (const auto& p : probes) {
        Category cat;
        if (std::hypot(p.grad_a, p.grad_b) <= noise_scale / 2.0) {
            cat = Category::below_noise;
            ++out.below_noise;
        } else if (std::abs(p.grad_a - p.grad_b) <= noise_scale) {
            cat = Category::potentially_independent;
            ++out.potentially_independent;
        } else {
            cat = Category::dependent;
            ++out.dependent;
        }
        out.categories.push_back(cat);
    }
    return out;
}

}  // namespace boolrc::analytics
