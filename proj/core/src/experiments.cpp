#include "boolrc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>

namespace boolrc::experiments {

EvalContext System::train_context(double sigma_out) const {
    EvalContext ctx;
    ctx.states = &train_states;
    ctx.target = train_target;
    ctx.noise.sigma_out = sigma_out;
    return ctx;
}

EvalContext System::test_context(double sigma_out) const {
    EvalContext ctx;
    ctx.states = &test_states;
    ctx.target = test_target;
    ctx.noise.sigma_out = sigma_out;
    return ctx;
}

System build_system(const RunConfig& cfg) {
    System sys;
    sys.params = cfg.reservoir;
    sys.params.seed = derive_seed(cfg.seed, "reservoir");

    const auto raw = task::generate_mackey_glass(cfg.task.mg, cfg.task.length,
                                                 derive_seed(cfg.seed, "task"));
    const auto normalized = task::normalize(raw);
    sys.dataset = task::make_dataset(normalized, cfg.task.washout,
                                     cfg.task.train_len, cfg.task.test_len);

    sys.illumination = reservoir::make_illumination(sys.params);
    sys.theta = reservoir::build_theta(sys.params);
    sys.coupling = reservoir::build_coupling(sys.params, cfg.kernel_radius);
    sys.injection = reservoir::build_injection(sys.params);

    sys.train_states = reservoir::run(sys.params, sys.illumination, sys.theta,
                                      sys.coupling, sys.injection, sys.dataset,
                                      reservoir::Window::train);
    sys.train_target = sys.dataset.train_targets();
    if (cfg.task.test_len > 0) {
        sys.test_states = reservoir::run(sys.params, sys.illumination, sys.theta,
                                         sys.coupling, sys.injection, sys.dataset,
                                         reservoir::Window::test);
        sys.test_target = sys.dataset.test_targets();
    }
    return sys;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(a, b);
}

namespace {

std::vector<double> eval_eps_of(const LearningTrace& t) {
    std::vector<double> eps;
    eps.reserve(t.epochs.size() - 1);
    for (std::size_t k = 1; k < t.epochs.size(); ++k) eps.push_back(t.epochs[k].eps);
    return eps;
}

std::vector<double> hamming_trace(const LearningTrace& a, const LearningTrace& b) {
    std::vector<double> h;
    h.reserve(a.weight_snapshots.size());
    for (std::size_t k = 0; k < a.weight_snapshots.size(); ++k)
        h.push_back(analytics::hamming(a.weight_snapshots[k], b.weight_snapshots[k]));
    return h;
}

}  // namespace

EnsembleReport run_ensemble(const System& system, const RunConfig& cfg,
                            std::uint64_t seed_salt, int threads) {
    const int n = system.params.node_count();
    const int m = cfg.experiment.minimizers;
    const int k_budget = cfg.epoch_budget();
    const auto ctx = system.train_context(cfg.noise.sigma_out);

    const auto shared_init =
        learner::random_weights(n, derive_seed(cfg.seed, "init-weights", seed_salt));

    std::vector<std::future<LearningTrace>> futures;
    futures.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        learner::MinimizerConfig mc;
        mc.epochs = k_budget;
        mc.mode = cfg.learner.mode == learner::Mode::greedy ? learner::Mode::greedy
                                                            : learner::Mode::markovian;
        mc.compare = cfg.learner.compare;
        mc.selector_seed = derive_seed(cfg.seed, "selector", seed_salt * 100000 + i);
        mc.noise_seed = derive_seed(cfg.seed, "noise", seed_salt * 100000 + i);
        mc.initial_weights =
            cfg.experiment.shared_initial_weights
                ? shared_init
                : learner::random_weights(
                      n, derive_seed(cfg.seed, "init-weights", seed_salt * 100000 + i + 1));
        const auto policy = threads > 1 ? std::launch::async : std::launch::deferred;
        futures.push_back(
            std::async(policy, [&ctx, mc] { return learner::run_minimizer(ctx, mc); }));
    }

    EnsembleReport report;
    report.traces.reserve(static_cast<std::size_t>(m));
    for (auto& f : futures) report.traces.push_back(f.get());

    report.avg_accepted_eps.assign(static_cast<std::size_t>(k_budget) + 1, 0.0);
    std::vector<BooleanWeights> minima;
    double k_min_sum = 0.0;
    for (const auto& t : report.traces) {
        for (std::size_t k = 0; k < t.accepted_eps.size(); ++k)
            report.avg_accepted_eps[k] += t.accepted_eps[k] / m;
        minima.push_back(t.final_weights);
        k_min_sum += t.k_min;
        // Train/test errors of the converged weights from one fresh evaluation
        // each: the running minimum is biased low by noise record statistics,
        // so it is kept in the trace but not used for the generalization gap.
        auto train_ctx = ctx;
        train_ctx.noise.noise_seed = t.noise_seed;
        report.eps_train.push_back(learner::evaluate_full(
            train_ctx, t.final_weights, 2 * static_cast<std::uint64_t>(k_budget) + 2));
        if (cfg.task.test_len > 0) {
            auto test_ctx = system.test_context(cfg.noise.sigma_out);
            test_ctx.noise.noise_seed = t.noise_seed;
            report.eps_test.push_back(learner::evaluate_full(
                test_ctx, t.final_weights, 2 * static_cast<std::uint64_t>(k_budget) + 3));
        }
    }
    report.mean_k_min = k_min_sum / m;
    // The exponential regime is the initial descent: fit while the averaged
    // error is still well clear of its plateau (3x), capped at one greedy
    // block; closer to the plateau the floor bends the log-trace flat.
    const auto& avg = report.avg_accepted_eps;
    std::size_t fit_len = std::min<std::size_t>(avg.size(), static_cast<std::size_t>(n) + 1);
    const double plateau = avg.back();
    for (std::size_t k = 16; k < fit_len; ++k) {
        if (avg[k] <= 3.0 * plateau) {
            fit_len = k + 1;
            break;
        }
    }
    report.exp_fit = analytics::fit_exponential({avg.begin(), avg.begin() + fit_len});
    if (m >= 2) report.minima = analytics::pairwise_minima_stats(minima);
    return report;
}

MasterSlaveReport run_master_slave(const System& system, const RunConfig& cfg,
                                   int n_slaves, std::uint64_t seed_salt) {
    if (n_slaves < 1) throw ConfigError("run_master_slave: need at least one slave");
    const int n = system.params.node_count();
    const int k_budget = cfg.epoch_budget();
    const auto ctx = system.train_context(cfg.noise.sigma_out);
    const int repeats = std::max(1, cfg.experiment.repeats);

    MasterSlaveReport report;
    std::vector<double> avg_h(static_cast<std::size_t>(k_budget) + 1, 0.0);
    int pair_count = 0;

    for (int g = 0; g < repeats; ++g) {
        const std::uint64_t group = seed_salt * 1000 + static_cast<std::uint64_t>(g);
        const auto init =
            learner::random_weights(n, derive_seed(cfg.seed, "init-weights", group));

        std::vector<LearningTrace> traces;
        learner::MinimizerConfig mc;
        mc.epochs = k_budget;
        mc.mode = cfg.learner.mode;
        mc.compare = cfg.learner.compare;
        mc.initial_weights = init;
        mc.record_weights = true;
        mc.selector_seed = derive_seed(cfg.seed, "selector", group);
        mc.noise_seed = derive_seed(cfg.seed, "noise", group * 100);
        traces.push_back(learner::run_minimizer(ctx, mc));

        const auto& sequence = traces.front().mutation_sequence;
        for (int s = 1; s <= n_slaves; ++s) {
            mc.noise_seed =
                derive_seed(cfg.seed, "noise", group * 100 + static_cast<std::uint64_t>(s));
            traces.push_back(learner::run_minimizer(ctx, mc, &sequence));
        }

        for (std::size_t a = 0; a < traces.size(); ++a) {
            for (std::size_t b = a + 1; b < traces.size(); ++b) {
                auto h = hamming_trace(traces[a], traces[b]);
                for (std::size_t k = 0; k < h.size(); ++k) avg_h[k] += h[k];
                ++pair_count;
                if (g == 0) report.pair_h.push_back(std::move(h));
            }
        }
        if (g == 0) {
            const auto master_eps = eval_eps_of(traces.front());
            for (std::size_t s = 1; s < traces.size(); ++s) {
                try {
                    report.eps_correlations.push_back(
                        correlation(master_eps, eval_eps_of(traces[s])));
                } catch (const DegenerateError&) {
                    report.eps_correlations.push_back(1.0);  // identical constant traces
                }
                for (std::size_t k = 0; k < traces[s].epochs.size(); ++k)
                    traces[s].epochs[k].hamming_to_ref = analytics::hamming(
                        traces[0].weight_snapshots[k], traces[s].weight_snapshots[k]);
            }
            report.traces = std::move(traces);
        }
    }

    for (auto& v : avg_h) v /= pair_count;
    report.avg_h = avg_h;
    const auto mode = cfg.learner.mode == learner::Mode::greedy
                          ? analytics::ExplorationMode::greedy
                          : analytics::ExplorationMode::markovian;
    report.rate_fit = analytics::fit_rate_model({avg_h}, mode, n);
    return report;
}

SeparatedPairReport run_separated_pair(const System& system, const RunConfig& cfg,
                                       int h1, std::uint64_t seed_salt) {
    const int n = system.params.node_count();
    if (h1 <= 0 || h1 > n) throw ConfigError("run_separated_pair: H1 outside (0, N]");
    const int k_budget = cfg.epoch_budget();
    const auto ctx = system.train_context(cfg.noise.sigma_out);
    const int repeats = std::max(1, cfg.experiment.repeats);

    SeparatedPairReport report;
    report.h1 = h1;
    std::vector<double> avg_h(static_cast<std::size_t>(k_budget) + 1, 0.0);

    for (int g = 0; g < repeats; ++g) {
        const std::uint64_t group = seed_salt * 1000 + static_cast<std::uint64_t>(g);
        const auto init_a =
            learner::random_weights(n, derive_seed(cfg.seed, "init-weights", group));

        // Exact separation: flip h1 uniformly chosen distinct positions.
        auto init_b = init_a;
        std::vector<int> positions(static_cast<std::size_t>(n));
        std::iota(positions.begin(), positions.end(), 0);
        std::mt19937_64 rng(derive_seed(cfg.seed, "separation", group));
        std::shuffle(positions.begin(), positions.end(), rng);
        for (int i = 0; i < h1; ++i) init_b[positions[i]] ^= 1;

        learner::MinimizerConfig mc;
        mc.epochs = k_budget;
        mc.mode = cfg.learner.mode;
        mc.compare = cfg.learner.compare;
        mc.record_weights = true;
        mc.selector_seed = derive_seed(cfg.seed, "selector", group);

        mc.initial_weights = init_a;
        mc.noise_seed = derive_seed(cfg.seed, "noise", group * 100);
        auto master = learner::run_minimizer(ctx, mc);

        mc.initial_weights = init_b;
        mc.noise_seed = derive_seed(cfg.seed, "noise", group * 100 + 1);
        auto slave = learner::run_minimizer(ctx, mc, &master.mutation_sequence);

        auto h = hamming_trace(master, slave);
        for (std::size_t k = 0; k < h.size(); ++k) avg_h[k] += h[k] / repeats;
        if (g == 0) {
            for (std::size_t k = 0; k < slave.epochs.size(); ++k)
                slave.epochs[k].hamming_to_ref = static_cast<int>(h[k]);
            report.ms.pair_h.push_back(std::move(h));
            report.ms.traces.push_back(std::move(master));
            report.ms.traces.push_back(std::move(slave));
        }
    }

    report.ms.avg_h = avg_h;
    const auto mode = cfg.learner.mode == learner::Mode::greedy
                          ? analytics::ExplorationMode::greedy
                          : analytics::ExplorationMode::markovian;
    report.ms.rate_fit = analytics::fit_rate_model({avg_h}, mode, n);
    report.predicted_h =
        analytics::predict_hamming(report.ms.rate_fit.params, static_cast<double>(h1),
                                   k_budget + 1)
            .h;
    return report;
}

InvertedPathsReport run_inverted_paths(const System& system, const RunConfig& cfg,
                                       std::uint64_t seed_salt) {
    const int n = system.params.node_count();
    const int k_budget = cfg.epoch_budget();
    const auto ctx = system.train_context(cfg.noise.sigma_out);

    InvertedPathsReport report;
    learner::MinimizerConfig mc;
    mc.epochs = k_budget;
    mc.mode = cfg.learner.mode;
    mc.compare = cfg.learner.compare;

    mc.initial_weights =
        learner::random_weights(n, derive_seed(cfg.seed, "init-weights", seed_salt * 7 + 1));
    mc.selector_seed = derive_seed(cfg.seed, "selector", seed_salt * 7 + 1);
    mc.noise_seed = derive_seed(cfg.seed, "noise", seed_salt * 7 + 1);
    report.minimum_a = learner::run_minimizer(ctx, mc).final_weights;

    mc.initial_weights =
        learner::random_weights(n, derive_seed(cfg.seed, "init-weights", seed_salt * 7 + 2));
    mc.selector_seed = derive_seed(cfg.seed, "selector", seed_salt * 7 + 2);
    mc.noise_seed = derive_seed(cfg.seed, "noise", seed_salt * 7 + 2);
    report.minimum_b = learner::run_minimizer(ctx, mc).final_weights;

    for (int i = 0; i < n; ++i)
        if (report.minimum_a[i] != report.minimum_b[i]) report.flip_order.push_back(i);
    if (report.flip_order.empty())
        throw DegenerateError("run_inverted_paths: minima are identical");
    std::mt19937_64 rng(derive_seed(cfg.seed, "path-order", seed_salt));
    std::shuffle(report.flip_order.begin(), report.flip_order.end(), rng);

    EvalContext path_ctx = ctx;
    path_ctx.noise.noise_seed = derive_seed(cfg.seed, "path-noise", seed_salt);
    learner::ReadoutEvaluator eval_a(*ctx.states, report.minimum_a);
    learner::ReadoutEvaluator eval_b(*ctx.states, report.minimum_b);

    report.eps_path_a.push_back(eval_a.error(path_ctx, 0));
    report.eps_path_b.push_back(eval_b.error(path_ctx, 1));
    std::uint64_t eval_id = 2;
    for (int l : report.flip_order) {
        eval_a.commit_flip(l);  // mutations along the probe path are always kept
        eval_b.commit_flip(l);
        report.eps_path_a.push_back(eval_a.error(path_ctx, eval_id++));
        report.eps_path_b.push_back(eval_b.error(path_ctx, eval_id++));
        report.gradients.push_back({report.eps_path_a.back() - report.eps_path_a.front(),
                                    report.eps_path_b.back() - report.eps_path_b.front()});
    }
    report.endpoints_exact = eval_a.weights() == report.minimum_b &&
                             eval_b.weights() == report.minimum_a;

    // Noise floor from repeated evaluation at minimum a.
    learner::ReadoutEvaluator floor_eval(*ctx.states, report.minimum_a);
    std::vector<double> eps_samples;
    for (int i = 0; i < cfg.experiment.probe_reps; ++i)
        eps_samples.push_back(floor_eval.error(path_ctx, 1000000 + static_cast<std::uint64_t>(i)));
    const double floor_std = stddev(eps_samples);
    report.noise_scale = floor_std > 0.0 ? std::sqrt(2.0) * floor_std : 1e-12;
    report.classification =
        analytics::classify_gradient_pairs(report.gradients, report.noise_scale);
    return report;
}

}  // namespace boolrc::experiments
