#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "boolrc/analytics.hpp"
#include "boolrc/experiments.hpp"

using namespace boolrc;
using namespace boolrc::analytics;

namespace {

experiments::System small_system() {
    auto cfg = config::defaults();
    cfg.reservoir.grid_side = 8;
    cfg.task.length = 260;
    cfg.task.test_len = 0;
    return experiments::build_system(cfg);
}

}  // namespace

TEST_CASE("hamming") {
    CHECK(hamming({0, 1, 0}, {0, 1, 0}) == 0);
    CHECK(hamming({0, 1, 0, 1}, {1, 0, 1, 0}) == 4);
    CHECK_THROWS_AS(hamming({0, 1}, {0, 1, 0}), DimensionError);

    // independent uniform vectors at N=961: binomial mean N/2
    const int n = 961, pairs = 1000;
    double acc = 0.0;
    for (int p = 0; p < pairs; ++p)
        acc += hamming(learner::random_weights(n, 2 * p), learner::random_weights(n, 2 * p + 1));
    CHECK(acc / pairs == doctest::Approx(480.5).epsilon(0.01));
}

TEST_CASE("predict_hamming") {
    RateModelParams p;
    p.n = 256;
    p.c_tilde = 0.3;
    p.c = 0.5 * (1.0 - std::sqrt(1.0 - 2.0 * p.c_tilde));

    SUBCASE("H = N/2 is a fixed point in both modes") {
        for (auto mode : {ExplorationMode::markovian, ExplorationMode::greedy}) {
            p.mode = mode;
            const auto t = predict_hamming(p, 128.0, 2000);
            for (double h : t.h) CHECK(h == 128.0);
        }
    }

    SUBCASE("C_tilde = 0 freezes the trace") {
        RateModelParams q = p;
        q.c_tilde = 0.0;
        q.mode = ExplorationMode::markovian;
        for (double h : predict_hamming(q, 37.0, 500).h) CHECK(h == 37.0);
    }

    SUBCASE("markovian closed form matches the recursion to 1e-9") {
        p.mode = ExplorationMode::markovian;
        const int k_max = 10 * p.n;
        const auto t = predict_hamming(p, 0.0, k_max);
        for (int k = 1; k <= k_max; ++k) {
            const double closed =
                (p.n / 2.0) * (1.0 - std::pow(1.0 - 2.0 * p.c_tilde / p.n, k - 1));
            CHECK(std::abs(t.h[k - 1] - closed) < 1e-9);
        }
    }

    SUBCASE("greedy first block is exactly linear with slope C_tilde") {
        p.mode = ExplorationMode::greedy;
        const auto t = predict_hamming(p, 0.0, 3 * p.n);
        for (int k = 1; k <= p.n; ++k)
            CHECK(t.h[k - 1] == doctest::Approx((k - 1) * p.c_tilde).epsilon(1e-12));
        // second block (k in [N+1, 2N], rho refrozen at k=N+1): smaller,
        // still constant slope
        const double s2 = t.h[p.n + 1] - t.h[p.n];
        CHECK(s2 < p.c_tilde);
        for (int k = p.n + 2; k < 2 * p.n; ++k)
            CHECK(t.h[k] - t.h[k - 1] == doctest::Approx(s2).epsilon(1e-9));
    }

    SUBCASE("monotone approach without overshoot") {
        p.mode = ExplorationMode::markovian;
        for (double h1 : {0.0, 30.0, 200.0, 256.0}) {
            const auto t = predict_hamming(p, h1, 4000);
            double prev = std::abs(h1 - 128.0);
            for (double h : t.h) {
                const double d = std::abs(h - 128.0);
                CHECK(d <= prev + 1e-12);
                prev = d;
            }
        }
    }

    SUBCASE("mirror symmetry about N/2") {
        p.mode = ExplorationMode::markovian;
        const auto a = predict_hamming(p, 40.0, 1000);
        const auto b = predict_hamming(p, 256.0 - 40.0, 1000);
        for (std::size_t k = 0; k < a.h.size(); ++k)
            CHECK(a.h[k] - 128.0 == doctest::Approx(128.0 - b.h[k]).epsilon(1e-9));
    }
}

TEST_CASE("fit_rate_model") {
    RateModelParams p;
    p.n = 256;
    p.mode = ExplorationMode::markovian;

    SUBCASE("recovers the generating C_tilde") {
        for (double ct : {0.05, 0.15, 0.3, 0.45}) {
            p.c_tilde = ct;
            const auto t = predict_hamming(p, 0.0, 2560);
            const auto fit = fit_rate_model({t.h}, ExplorationMode::markovian, p.n);
            CHECK(fit.params.c_tilde == doctest::Approx(ct).epsilon(1e-6));
            CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
            // C is the root of 2C(1-C) in [0, 0.5]
            CHECK(2.0 * fit.params.c * (1.0 - fit.params.c) ==
                  doctest::Approx(ct).epsilon(1e-9));
            CHECK(fit.params.c <= 0.5);
        }
    }

    SUBCASE("flat zero trace gives C_tilde near 0") {
        const std::vector<double> zero(1000, 0.0);
        const auto fit = fit_rate_model({zero}, ExplorationMode::markovian, p.n);
        CHECK(fit.params.c_tilde == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(fit.degenerate);
    }

    SUBCASE("fitted C_tilde stays in [0, 0.5] even on noisy traces") {
        std::vector<double> rough;
        for (int k = 0; k < 1000; ++k)
            rough.push_back(128.0 * (1.0 + 0.2 * (keyed_uniform(7, k) - 0.5)));
        const auto fit = fit_rate_model({rough}, ExplorationMode::markovian, p.n);
        CHECK(fit.params.c_tilde >= 0.0);
        CHECK(fit.params.c_tilde <= 0.5);
    }
}

TEST_CASE("estimate_flip_probability") {
    const auto sys = small_system();
    const int n = sys.train_states.cols();
    const auto w = learner::random_weights(n, 17);

    SUBCASE("returns zero without noise") {
        const auto ctx = sys.train_context(0.0);
        CHECK(estimate_flip_probability(ctx, w, 5, 200, 1) == 0.0);
    }

    SUBCASE("reps below 100 rejected") {
        const auto ctx = sys.train_context(1.0);
        CHECK_THROWS_AS(estimate_flip_probability(ctx, w, 5, 99, 1), ConfigError);
    }

    SUBCASE("matches an independent Monte-Carlo sign oracle within 3 SE") {
        for (double sigma : {2.0, 8.0, 32.0}) {
            const auto ctx = sys.train_context(sigma);
            const int reps = 2000;
            const double c = estimate_flip_probability(ctx, w, 5, reps, 101);

            // independent-stream oracle: fresh evaluation pairs, count sign
            // disagreements with the noise-free gradient
            auto quiet = sys.train_context(0.0);
            const auto flipped = learner::mutate(w, 5);
            const double g = learner::evaluate_full(quiet, flipped, 0) -
                             learner::evaluate_full(quiet, w, 0);
            auto probe = sys.train_context(sigma);
            probe.noise.noise_seed = 777;
            int disagree = 0;
            for (int i = 0; i < reps; ++i) {
                const double d = learner::evaluate_full(probe, flipped, 2 * i) -
                                 learner::evaluate_full(probe, w, 2 * i + 1);
                if ((d >= 0.0) != (g >= 0.0)) ++disagree;
            }
            const double oracle = static_cast<double>(disagree) / reps;
            const double se = std::sqrt(std::max(oracle * (1.0 - oracle), 1e-6) / reps);
            CHECK(std::abs(c - oracle) <= 3.0 * se + 1.0 / reps);
        }
    }
}

TEST_CASE("noise_sensitivity") {
    const auto sys = small_system();
    const auto ctx = sys.train_context(4.0);
    const auto w = learner::random_weights(sys.train_states.cols(), 3);

    SUBCASE("reports the requested sigma_n and a positive eps_dot") {
        const auto rep = noise_sensitivity(ctx, w, 150, 5);
        CHECK(rep.sigma_n == 4.0);
        CHECK(rep.eps_dot > 0.0);
        CHECK(rep.sigma_l >= 0.0);
    }

    SUBCASE("step-halving changes eps_dot by less than 1%") {
        const auto a = noise_sensitivity(ctx, w, 200, 5, 1e-3);
        const auto b = noise_sensitivity(ctx, w, 200, 5, 5e-4);
        CHECK(a.eps_dot == doctest::Approx(b.eps_dot).epsilon(0.01));
    }
}

TEST_CASE("fit_exponential") {
    SUBCASE("recovers synthetic parameters") {
        std::vector<double> eps;
        for (int k = 0; k < 500; ++k) eps.push_back(0.5 * std::exp(-0.01 * k));
        const auto fit = fit_exponential(eps);
        CHECK(fit.eps0 == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(fit.rate == doctest::Approx(0.01).epsilon(1e-6));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(fit.truncated);
    }

    SUBCASE("constant trace gives zero rate") {
        const std::vector<double> flat(100, 0.25);
        const auto fit = fit_exponential(flat);
        CHECK(fit.rate == doctest::Approx(0.0));
        CHECK(fit.eps0 == doctest::Approx(0.25));
    }

    SUBCASE("nonpositive entries are dropped and flagged") {
        std::vector<double> eps{0.5, 0.0, 0.45, 0.4};
        const auto fit = fit_exponential(eps);
        CHECK(fit.truncated);
    }
}

TEST_CASE("pairwise_minima_stats") {
    SUBCASE("20 minima give 190 distances") {
        std::vector<learner::BooleanWeights> minima;
        for (int i = 0; i < 20; ++i) minima.push_back(learner::random_weights(64, 900 + i));
        const auto stats = pairwise_minima_stats(minima);
        CHECK(stats.distances.size() == 190);
        CHECK(stats.mean == doctest::Approx(32.0).epsilon(0.15));
        CHECK(stats.std > 0.0);
        CHECK(stats.mean_abs_bit_correlation < 0.3);
    }

    SUBCASE("duplicated minimum produces a zero distance") {
        std::vector<learner::BooleanWeights> minima;
        minima.push_back(learner::random_weights(32, 1));
        minima.push_back(minima.front());
        minima.push_back(learner::random_weights(32, 2));
        const auto stats = pairwise_minima_stats(minima);
        CHECK(std::count(stats.distances.begin(), stats.distances.end(), 0) == 1);
    }
}

TEST_CASE("classify_gradient_pairs") {
    const double noise = 0.1;

    SUBCASE("category geometry") {
        std::vector<GradientPair> probes{
            {0.0, 0.0},     // origin: below noise
            {0.03, 0.02},   // inside the gray circle
            {1.0, 1.0},     // on-diagonal, large: potentially independent
            {1.0, 0.95},    // inside the diagonal band
            {1.0, -1.0},    // maximal asymmetry: dependent
            {0.5, 0.1},     // off-diagonal: dependent
        };
        const auto c = classify_gradient_pairs(probes, noise);
        CHECK(c.categories[0] == Category::below_noise);
        CHECK(c.categories[1] == Category::below_noise);
        CHECK(c.categories[2] == Category::potentially_independent);
        CHECK(c.categories[3] == Category::potentially_independent);
        CHECK(c.categories[4] == Category::dependent);
        CHECK(c.categories[5] == Category::dependent);
        CHECK(c.below_noise == 2);
        CHECK(c.potentially_independent == 2);
        CHECK(c.dependent == 2);
        CHECK(c.below_noise + c.potentially_independent + c.dependent ==
              static_cast<int>(probes.size()));
    }

    SUBCASE("separable toy: every probe lands on the diagonal") {
        // Additive landscape over the differing bits, each coordinate equally
        // good at either value: walking the inverted paths accumulates equal
        // (zero) gradients on both sides, so no probe can be classified as
        // dependent.
        const int m = 6;
        auto coord_cost = [](int bit, int value) {
            return 0.1 * bit * 0.0 * value;  // degenerate differing coordinates
        };
        std::vector<GradientPair> probes;
        double eps_a = 0.0, eps_b = 0.0;
        for (int k = 0; k < m; ++k) {
            eps_a += coord_cost(k, 1) - coord_cost(k, 0);
            eps_b += coord_cost(k, 0) - coord_cost(k, 1);
            probes.push_back({eps_a, eps_b});
        }
        const auto c = classify_gradient_pairs(probes, 1e-6);
        CHECK(c.dependent == 0);
        for (const auto& p : probes) CHECK(p.grad_a == doctest::Approx(p.grad_b));
    }
}
