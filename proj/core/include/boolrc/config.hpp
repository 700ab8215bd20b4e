#pragma once

#include <cstdint>
#include <string>

#include "boolrc/learner.hpp"
#include "boolrc/task.hpp"

#include <nlohmann/json_fwd.hpp>

namespace boolrc::config {

struct TaskConfig {
    task::MackeyGlassParams mg;
    int length = 2400;
    int washout = 30;
    int train_len = 200;
    int test_len = 2000;
};

struct LearnerConfig {
    int epochs = 0;  // 0 means 4N
    learner::Mode mode = learner::Mode::greedy;
    learner::DeltaEpsCompare compare = learner::DeltaEpsCompare::stored;
};

// Default width chosen so noise dominates the per-bit systematic gradients
// (the single-rate divergence model then fits the Hamming traces) while the
// generalization gap stays small; the raw readout is an intensity with std
// of order 10^2.
struct NoiseConfig {
    double sigma_out = 64.0;
};

struct ExperimentConfig {
    int minimizers = 20;
    bool shared_initial_weights = true;
    int initial_hamming = 0;  // separated-pair H(1)
    int repeats = 1;          // independent pair-runs to average over
    int probe_reps = 200;     // repeated-evaluation probes (noise floor, C estimates)
};

struct RunConfig {
    std::uint64_t seed = 42;
    TaskConfig task;
    reservoir::ReservoirParams reservoir;
    int kernel_radius = 2;
    LearnerConfig learner;
    NoiseConfig noise;
    ExperimentConfig experiment;

    int epoch_budget() const {
        return learner.epochs > 0 ? learner.epochs : 4 * reservoir.node_count();
    }
};

RunConfig defaults();

// Strict parse: unknown keys anywhere in the document are rejected.
RunConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

RunConfig load_file(const std::string& path);

// FNV-1a over the canonical (key-sorted) JSON dump.
std::uint64_t config_hash(const RunConfig& cfg);

// Hash of the sections that determine the StateMatrix (task, reservoir,
// kernel_radius); the key for the states cache.
std::uint64_t system_params_hash(const RunConfig& cfg);

// Applies a dotted-path override like "noise.sigma_out=0.02" onto the JSON
// form of a config; values are parsed as JSON, falling back to string.
void apply_override(nlohmann::json& j, const std::string& key_value);

}  // namespace boolrc::config
