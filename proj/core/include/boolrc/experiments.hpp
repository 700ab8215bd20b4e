#pragma once

#include <cstdint>
#include <vector>

#include "boolrc/analytics.hpp"
#include "boolrc/config.hpp"
#include "boolrc/learner.hpp"

namespace boolrc::experiments {

using config::RunConfig;
using learner::BooleanWeights;
using learner::EvalContext;
using learner::LearningTrace;

// Everything simulation-derived that learning treats as read-only.
struct System {
    reservoir::ReservoirParams params;
    reservoir::IlluminationProfile illumination;
    std::vector<double> theta;
    reservoir::CouplingMatrix coupling;
    reservoir::InjectionWeights injection;
    task::Dataset dataset;
    reservoir::StateMatrix train_states;
    reservoir::StateMatrix test_states;
    std::vector<double> train_target;
    std::vector<double> test_target;

    EvalContext train_context(double sigma_out) const;
    EvalContext test_context(double sigma_out) const;
};

System build_system(const RunConfig& cfg);

// Pearson correlation; throws DegenerateError on zero variance.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

struct EnsembleReport {
    std::vector<LearningTrace> traces;
    std::vector<double> avg_accepted_eps;  // k = 0..K
    analytics::ExponentialFit exp_fit;
    analytics::MinimaStats minima;
    std::vector<double> eps_train;  // final weights re-evaluated on the train window
    std::vector<double> eps_test;   // final weights on the test window
    double mean_k_min = 0.0;
};

// M minimizers with shared or independent initial weights, independent
// selector and noise streams.
EnsembleReport run_ensemble(const System& system, const RunConfig& cfg,
                            std::uint64_t seed_salt = 0, int threads = 1);

struct MasterSlaveReport {
    std::vector<LearningTrace> traces;  // [0] is the master
    // Pairwise H(k) traces, k = 0..K, pairs in (i<j) order over minimizers.
    std::vector<std::vector<double>> pair_h;
    std::vector<double> avg_h;  // mean over pairs and repeats, k = 1..K
    std::vector<double> eps_correlations;  // master-vs-slave Pearson
    analytics::RateModelFit rate_fit;
};

// Master generates l(k); slaves replay the identical sequence with
// independent noise streams and independent rewards, lockstep in k.
// Repeats average avg_h over cfg.experiment.repeats independent groups.
MasterSlaveReport run_master_slave(const System& system, const RunConfig& cfg,
                                   int n_slaves, std::uint64_t seed_salt = 0);

// Two minimizers starting at exact Hamming distance H1, master-slave
// protocol, compared against the fitted rate model.
struct SeparatedPairReport {
    MasterSlaveReport ms;
    std::vector<double> predicted_h;  // rate model from H1 with the fitted C
    int h1 = 0;
};

SeparatedPairReport run_separated_pair(const System& system, const RunConfig& cfg,
                                       int h1, std::uint64_t seed_salt = 0);

struct InvertedPathsReport {
    BooleanWeights minimum_a;
    BooleanWeights minimum_b;
    std::vector<int> flip_order;       // the m differing positions, shuffled
    std::vector<double> eps_path_a;    // k = 0..m
    std::vector<double> eps_path_b;
    std::vector<analytics::GradientPair> gradients;  // one per step k = 1..m
    double noise_scale = 0.0;
    analytics::DimensionClassification classification;
    bool endpoints_exact = false;
};

// Converge two independent minimizers, then walk the two inverted paths
// between their minima, applying every flip unconditionally.
InvertedPathsReport run_inverted_paths(const System& system, const RunConfig& cfg,
                                       std::uint64_t seed_salt = 0);

}  // namespace boolrc::experiments
