#include "boolrc/learner.hpp"

#include <cmath>

namespace boolrc::learner {

SelectorState::SelectorState(Mode m, int n, std::uint64_t seed)
    : mode(m), bias(static_cast<std::size_t>(n), 1.0), rng(seed) {
    if (mode == Mode::greedy) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (auto& b : bias) b = u01(rng);
    }
}

int select(SelectorState& selector) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int best = -1;
    double best_val = -1.0;
    for (std::size_t i = 0; i < selector.bias.size(); ++i) {
        const double v = u01(selector.rng) * selector.bias[i];
        if (v > best_val) {
            best_val = v;
            best = static_cast<int>(i);
        }
    }
    if (best < 0 || best_val <= 0.0)
        throw DegenerateError("select: all-zero selector");
    return best;
}

void update_bias(SelectorState& selector, int l) {
    if (selector.mode != Mode::greedy) return;
    const double inc = 1.0 / static_cast<double>(selector.bias.size());
    for (auto& b : selector.bias) b += inc;
    selector.bias[static_cast<std::size_t>(l)] = 0.0;
}

BooleanWeights mutate(const BooleanWeights& weights, int l) {
    if (l < 0 || l >= static_cast<int>(weights.size()))
        throw std::out_of_range("mutate: index out of range");
    BooleanWeights out = weights;
    out[static_cast<std::size_t>(l)] ^= 1;
    return out;
}

double evaluate_error(const std::vector<double>& y_norm,
                      const std::vector<double>& target) {
    if (y_norm.size() != target.size())
        throw DimensionError("evaluate_error: length mismatch");
    if (y_norm.empty()) throw DimensionError("evaluate_error: empty window");
    double s = 0.0;
    for (std::size_t i = 0; i < y_norm.size(); ++i) {
        const double d = target[i] - y_norm[i];
        s += d * d;
    }
    return s / static_cast<double>(y_norm.size());
}

BooleanWeights random_weights(int n, std::uint64_t seed) {
    BooleanWeights w(static_cast<std::size_t>(n));
    std::mt19937_64 rng(seed);
    for (auto& b : w) b = static_cast<std::uint8_t>(rng() & 1u);
    return w;
}

double evaluate_full(const EvalContext& ctx, const BooleanWeights& weights,
                     std::uint64_t eval_id) {
    const auto y = reservoir::readout(*ctx.states, weights, ctx.noise, eval_id);
    try {
        return evaluate_error(reservoir::normalize_output(y), ctx.target);
    } catch (const DegenerateError&) {
        return 1.0;  // all-zero weights are a legal, escapable optimizer state
    }
}

ReadoutEvaluator::ReadoutEvaluator(const StateMatrix& states, BooleanWeights weights)
    : states_(&states), weights_(std::move(weights)),
      sums_(static_cast<std::size_t>(states.rows()), 0.0) {
    if (static_cast<int>(weights_.size()) != states.cols())
        throw DimensionError("ReadoutEvaluator: weight length mismatch");
    for (int col = 0; col < states.cols(); ++col) {
        if (!weights_[col]) continue;
        const double* c = states.column(col);
        for (int r = 0; r < states.rows(); ++r) sums_[r] += c[r];
    }
}

double ReadoutEvaluator::error_from_sums(const EvalContext& ctx,
                                         const std::vector<double>& sums,
                                         std::uint64_t eval_id) const {
    std::vector<double> y(sums.size());
    for (std::size_t r = 0; r < sums.size(); ++r) {
        y[r] = sums[r] * sums[r];
        if (ctx.noise.sigma_out > 0.0)
            y[r] += ctx.noise.sigma_out *
                    keyed_gaussian(ctx.noise.noise_seed, eval_id, r);
    }
    try {
        return evaluate_error(reservoir::normalize_output(y), ctx.target);
    } catch (const DegenerateError&) {
        return 1.0;
    }
}

double ReadoutEvaluator::error(const EvalContext& ctx, std::uint64_t eval_id) const {
    return error_from_sums(ctx, sums_, eval_id);
}

double ReadoutEvaluator::error_with_flip(const EvalContext& ctx, int l,
                                         std::uint64_t eval_id) const {
    if (l < 0 || l >= static_cast<int>(weights_.size()))
        throw std::out_of_range("error_with_flip: index out of range");
    std::vector<double> sums = sums_;
    const double sign = weights_[l] ? -1.0 : 1.0;
    const double* c = states_->column(l);
    for (std::size_t r = 0; r < sums.size(); ++r) sums[r] += sign * c[r];
    return error_from_sums(ctx, sums, eval_id);
}

void ReadoutEvaluator::commit_flip(int l) {
    if (l < 0 || l >= static_cast<int>(weights_.size()))
        throw std::out_of_range("commit_flip: index out of range");
    const double sign = weights_[l] ? -1.0 : 1.0;
    const double* c = states_->column(l);
    for (std::size_t r = 0; r < sums_.size(); ++r) sums_[r] += sign * c[r];
    weights_[l] ^= 1;
}

LearningTrace run_minimizer(const EvalContext& ctx, const MinimizerConfig& config,
                            const std::vector<int>* mutation_override) {
    if (config.epochs < 1) throw ConfigError("run_minimizer: epoch budget must be >= 1");
    if (mutation_override &&
        static_cast<int>(mutation_override->size()) < config.epochs)
        throw ConfigError("run_minimizer: mutation override shorter than epoch budget");

    const int n = ctx.states->cols();
    SelectorState selector(config.mode, n, config.selector_seed);
    ReadoutEvaluator evaluator(*ctx.states, config.initial_weights);
    NoiseParams noise = ctx.noise;
    noise.noise_seed = config.noise_seed;
    EvalContext local = ctx;
    local.noise = noise;

    const bool remeasure = config.compare == DeltaEpsCompare::remeasure;
    auto eval_id = [&](int k, bool baseline) -> std::uint64_t {
        // Distinct stream key per evaluation; remeasure mode needs two per epoch.
        return remeasure ? static_cast<std::uint64_t>(2 * k + (baseline ? 1 : 0))
                         : static_cast<std::uint64_t>(k);
    };

    LearningTrace trace;
    trace.selector_seed = config.selector_seed;
    trace.noise_seed = config.noise_seed;

    double eps_stored = evaluator.error(local, eval_id(0, false));
    trace.eps_min = eps_stored;
    trace.k_min = 0;
    trace.epochs.push_back({0, -1, eps_stored, false, trace.eps_min, trace.k_min, -1});
    trace.accepted_eps.push_back(eps_stored);
    if (config.record_weights) trace.weight_snapshots.push_back(evaluator.weights());

    for (int k = 1; k <= config.epochs; ++k) {
        int l;
        if (mutation_override) {
            l = (*mutation_override)[static_cast<std::size_t>(k) - 1];
        } else {
            l = select(selector);
            update_bias(selector, l);
        }
        trace.mutation_sequence.push_back(l);

        const double eps_new = evaluator.error_with_flip(local, l, eval_id(k, false));
        const double eps_base =
            remeasure ? evaluator.error(local, eval_id(k, true)) : eps_stored;
        const bool r = reward(eps_new - eps_base);
        if (r) {
            evaluator.commit_flip(l);
            eps_stored = eps_new;
            if (eps_new < trace.eps_min) {
                trace.eps_min = eps_new;
                trace.k_min = k;
            }
        }
        trace.epochs.push_back({k, l, eps_new, r, trace.eps_min, trace.k_min, -1});
        trace.accepted_eps.push_back(eps_stored);
        if (config.record_weights) trace.weight_snapshots.push_back(evaluator.weights());
    }
    trace.final_weights = evaluator.weights();
    return trace;
}

}  // namespace boolrc::learner
