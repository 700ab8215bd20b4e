#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "boolrc/reservoir.hpp"

namespace boolrc::learner {

using reservoir::BooleanWeights;
using reservoir::NoiseParams;
using reservoir::StateMatrix;

enum class Mode { markovian, greedy };

// Baseline for the error comparison when the previous epoch was rejected:
// `stored` reuses the accepted configuration's stored error (one evaluation
// per epoch, as in the three-phase loop); `remeasure` re-evaluates the
// accepted configuration with fresh noise each epoch.
enum class DeltaEpsCompare { stored, remeasure };

struct SelectorState {
    Mode mode = Mode::greedy;
    std::vector<double> bias;
    std::mt19937_64 rng;

    SelectorState(Mode m, int n, std::uint64_t seed);
};

// l(k) = argmax(rand(N) * bias), ties broken by lowest index.
int select(SelectorState& selector);

// Greedy: all bias entries += 1/N, then entry l reset to 0. Markovian: no-op.
void update_bias(SelectorState& selector, int l);

BooleanWeights mutate(const BooleanWeights& weights, int l);

// Normalized mean square error over the evaluation window.
double evaluate_error(const std::vector<double>& y_norm,
                      const std::vector<double>& target);

inline bool reward(double delta_eps) { return delta_eps < 0.0; }

inline BooleanWeights apply_reward(const BooleanWeights& current,
                                   const BooleanWeights& proposed, bool r) {
    return r ? proposed : current;
}

BooleanWeights random_weights(int n, std::uint64_t seed);

// Evaluation context: immutable states, the matching target window and the
// noise stream for this minimizer.
struct EvalContext {
    const StateMatrix* states = nullptr;
    std::vector<double> target;
    NoiseParams noise;
};

// Error of a weight configuration via the full (non-incremental) readout
// path; also the oracle the incremental evaluator is checked against.
// A degenerate (zero-variance) output evaluates to the maximal error 1.0.
double evaluate_full(const EvalContext& ctx, const BooleanWeights& weights,
                     std::uint64_t eval_id);

// Incremental readout evaluation: the weighted sum s(n) is cached, and a
// single-bit flip is a rank-1 update s(n) +- x_l(n).
class ReadoutEvaluator {
public:
    ReadoutEvaluator(const StateMatrix& states, BooleanWeights weights);

    double error(const EvalContext& ctx, std::uint64_t eval_id) const;
    double error_with_flip(const EvalContext& ctx, int l, std::uint64_t eval_id) const;
    void commit_flip(int l);
    const BooleanWeights& weights() const { return weights_; }

private:
    double error_from_sums(const EvalContext& ctx, const std::vector<double>& sums,
                           std::uint64_t eval_id) const;

    const StateMatrix* states_;
    BooleanWeights weights_;
    std::vector<double> sums_;
};

struct MinimizerConfig {
    int epochs = 0;  // K
    Mode mode = Mode::greedy;
    std::uint64_t selector_seed = 0;
    std::uint64_t noise_seed = 0;
    BooleanWeights initial_weights;
    DeltaEpsCompare compare = DeltaEpsCompare::stored;
    bool record_weights = false;  // per-epoch snapshots for Hamming analytics
};

struct EpochRecord {
    int k = 0;
    int l = -1;          // -1 for the epoch-0 baseline
    double eps = 0.0;    // error of the evaluated (proposed) configuration
    bool r = false;
    double eps_min = 0.0;
    int k_min = 0;
    int hamming_to_ref = -1;  // filled by experiments when a reference exists
};

struct LearningTrace {
    std::vector<EpochRecord> epochs;  // index 0 is the pre-mutation baseline
    double eps_min = 0.0;
    int k_min = 0;
    BooleanWeights final_weights;
    std::vector<int> mutation_sequence;          // l(k), k = 1..K
    std::vector<double> accepted_eps;            // accepted-config error after each epoch
    std::vector<BooleanWeights> weight_snapshots;  // k = 0..K if recorded
    std::uint64_t selector_seed = 0;
    std::uint64_t noise_seed = 0;
};

// K epochs of select -> mutate -> evaluate -> reward -> accept/reject over a
// prebuilt StateMatrix. When mutation_override is given the selector is
// bypassed and the override supplies l(k) (master-slave replay).
LearningTrace run_minimizer(const EvalContext& ctx, const MinimizerConfig& config,
                            const std::vector<int>* mutation_override = nullptr);

}  // namespace boolrc::learner
