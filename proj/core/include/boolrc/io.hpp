#pragma once

#include <cstdint>
#include <string>

#include "boolrc/learner.hpp"
#include "boolrc/task.hpp"

namespace boolrc::io {

// Consistent shortest-roundtrip formatting so reruns are byte-identical.
std::string format_double(double v);

// Columns: k, l, eps, r, eps_min, k_min, hamming_to_ref.
void write_trace_csv(const std::string& path, const learner::LearningTrace& trace);

// Columns: n, u, target (last target column empty for the final row).
void write_dataset_csv(const std::string& path, const task::Dataset& dataset);

// Binary cache of train/test state matrices keyed by (seed, params hash).
struct StatesCache {
    reservoir::StateMatrix train;
    reservoir::StateMatrix test;
    std::uint64_t seed = 0;
    std::uint64_t params_hash = 0;
};

void save_states_cache(const std::string& path, const StatesCache& cache);

// Throws ConfigError with an explicit hash diff when the cache does not match
// the expected (seed, params hash).
StatesCache load_states_cache(const std::string& path, std::uint64_t expected_seed,
                              std::uint64_t expected_params_hash);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace boolrc::io
