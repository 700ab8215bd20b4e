#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "boolrc/experiments.hpp"
#include "boolrc/learner.hpp"
#include "boolrc/reservoir.hpp"

using namespace boolrc;
using namespace boolrc::reservoir;

namespace {

ReservoirParams small_params(int side = 3) {
    ReservoirParams p;
    p.grid_side = side;
    p.seed = 11;
    return p;
}

config::RunConfig small_config() {
    auto cfg = config::defaults();
    cfg.reservoir.grid_side = 8;
    cfg.task.length = 260;
    cfg.task.test_len = 0;
    cfg.task.train_len = 200;
    return cfg;
}

}  // namespace

TEST_CASE("build_coupling neighborhoods") {
    const auto p = small_params(5);

    SUBCASE("radius 0 is diagonal-only") {
        const auto m = build_coupling(p, 0);
        for (int i = 0; i < m.n; ++i) {
            CHECK(m.row_ptr[i + 1] - m.row_ptr[i] == 1);
            CHECK(m.col_idx[m.row_ptr[i]] == i);
        }
    }

    SUBCASE("radius 1 interior node has 9 neighbors") {
        const auto m = build_coupling(p, 1);
        const int center = 2 * 5 + 2;
        CHECK(m.row_ptr[center + 1] - m.row_ptr[center] == 9);
        const int corner = 0;
        CHECK(m.row_ptr[corner + 1] - m.row_ptr[corner] == 4);
    }

    SUBCASE("same seed gives identical matrices") {
        const auto a = build_coupling(p, 2);
        const auto b = build_coupling(p, 2);
        CHECK(a.values == b.values);
        CHECK(a.col_idx == b.col_idx);
    }
}

TEST_CASE("camera_intensity") {
    const auto p = small_params(3);
    NetworkState state;
    state.fields.assign(9, 0.0);

    SUBCASE("zero fields give zero intensity") {
        const auto m = build_coupling(p, 1);
        for (double v : camera_intensity(state, m, p.alpha)) CHECK(v == 0.0);
    }

    SUBCASE("unit diagonal coupling squares the field") {
        CouplingMatrix diag;
        diag.n = 9;
        diag.kernel_radius = 0;
        diag.row_ptr.push_back(0);
        for (int i = 0; i < 9; ++i) {
            diag.col_idx.push_back(i);
            diag.values.emplace_back(1.0, 0.0);
            diag.row_ptr.push_back(i + 1);
        }
        for (int i = 0; i < 9; ++i) state.fields[i] = 0.1 * (i + 1);
        const auto cam = camera_intensity(state, diag, 2.0);
        for (int i = 0; i < 9; ++i)
            CHECK(cam[i] == doctest::Approx(2.0 * state.fields[i] * state.fields[i]));
    }

    SUBCASE("matches a dense brute-force oracle") {
        const auto m = build_coupling(p, 2);
        for (int i = 0; i < 9; ++i)
            state.fields[i] = std::sin(1.7 * i + 0.3);

        // dense oracle
        std::vector<std::vector<std::complex<double>>> dense(
            9, std::vector<std::complex<double>>(9, {0.0, 0.0}));
        for (int i = 0; i < 9; ++i)
            for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
                dense[i][m.col_idx[k]] = m.values[k];
        const auto cam = camera_intensity(state, m, p.alpha);
        for (int i = 0; i < 9; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < 9; ++j) acc += dense[i][j] * state.fields[j];
            CHECK(cam[i] == doctest::Approx(p.alpha * std::norm(acc)).epsilon(1e-12));
        }
    }
}

TEST_CASE("step") {
    auto p = small_params(3);
    const auto illum = make_illumination(p);
    const auto coupling = build_coupling(p, 1);
    const auto injection = build_injection(p);

    NetworkState state;
    state.fields.assign(9, 0.5);
    state.intensities.assign(9, 0.25);

    SUBCASE("beta=0, gamma=0 reduces to the offset") {
        p.beta = 0.0;
        p.gamma = 0.0;
        const auto theta = build_theta(p);
        auto s1 = step(state, 0.7, p, illum, theta, coupling, injection);
        auto s2 = step(s1, -0.2, p, illum, theta, coupling, injection);
        for (int i = 0; i < 9; ++i) {
            const double expect =
                p.alpha * illum.e0[i] * illum.e0[i] * std::cos(theta[i]) * std::cos(theta[i]);
            CHECK(s1.intensities[i] == doctest::Approx(expect));
            CHECK(s2.intensities[i] == doctest::Approx(expect));
        }
    }

    SUBCASE("cos^2(pi/2) = 0") {
        p.beta = 0.0;
        p.gamma = 1.0;
        std::vector<double> theta(9, 0.0);
        InjectionWeights ones;
        ones.w.assign(9, 1.0);
        const auto s = step(state, std::numbers::pi / 2.0, p, illum, theta, coupling, ones);
        for (int i = 0; i < 9; ++i) CHECK(s.intensities[i] == doctest::Approx(0.0));
    }

    SUBCASE("intensities stay in range over many random steps") {
        const auto theta = build_theta(p);
        NetworkState s = state;
        for (int it = 0; it < 10000; ++it) {
            s = step(s, 3.0 * (keyed_uniform(4, it) - 0.5), p, illum, theta, coupling,
                     injection);
            for (int i = 0; i < 9; ++i) {
                CHECK(s.intensities[i] >= 0.0);
                CHECK(s.intensities[i] <= p.alpha * illum.e0[i] * illum.e0[i] + 1e-12);
            }
        }
    }
}

TEST_CASE("run produces the expected StateMatrix shape and is deterministic") {
    auto cfg = small_config();
    cfg.task.washout = 30;
    cfg.task.train_len = 200;
    const auto sys = experiments::build_system(cfg);
    CHECK(sys.train_states.rows() == 170);
    CHECK(sys.train_states.cols() == 64);

    const auto sys2 = experiments::build_system(cfg);
    CHECK(sys.train_states.raw() == sys2.train_states.raw());
}

TEST_CASE("readout") {
    const auto cfg = small_config();
    const auto sys = experiments::build_system(cfg);
    const int n = sys.train_states.cols();

    SUBCASE("all-zero weights give zero output") {
        BooleanWeights w(n, 0);
        for (double v : readout(sys.train_states, w, {0.0, 0}, 0)) CHECK(v == 0.0);
    }

    SUBCASE("single weight squares its column") {
        BooleanWeights w(n, 0);
        w[5] = 1;
        const auto y = readout(sys.train_states, w, {0.0, 0}, 0);
        for (int r = 0; r < sys.train_states.rows(); ++r) {
            const double x = sys.train_states.at(r, 5);
            CHECK(y[r] == doctest::Approx(x * x));
        }
    }

    SUBCASE("fresh noise per epoch with std sqrt(2)*sigma difference") {
        BooleanWeights w = learner::random_weights(n, 3);
        const double sigma = 0.05;
        std::vector<double> diffs;
        for (int epoch = 0; epoch < 60; ++epoch) {
            const auto a = readout(sys.train_states, w, {sigma, 77}, 2 * epoch);
            const auto b = readout(sys.train_states, w, {sigma, 77}, 2 * epoch + 1);
            for (std::size_t i = 0; i < a.size(); ++i) diffs.push_back(a[i] - b[i]);
        }
        CHECK(diffs.size() > 10000);
        CHECK(std::abs(mean(diffs)) < 0.01);
        CHECK(stddev(diffs) == doctest::Approx(std::sqrt(2.0) * sigma).epsilon(0.05));
    }

    SUBCASE("length mismatch throws") {
        BooleanWeights w(n + 1, 0);
        CHECK_THROWS_AS(readout(sys.train_states, w, {0.0, 0}, 0), DimensionError);
    }
}

TEST_CASE("normalize_output") {
    const auto cfg = small_config();
    const auto sys = experiments::build_system(cfg);
    const auto& target = sys.train_target;

    SUBCASE("affine-invariance: a*y + b normalizes to the same output") {
        std::vector<double> scaled;
        for (double t : target) scaled.push_back(3.2 * t + 11.0);
        const auto na = normalize_output(scaled);
        const auto nb = normalize_output(target);
        for (std::size_t i = 0; i < target.size(); ++i)
            CHECK(na[i] == doctest::Approx(nb[i]).epsilon(1e-9));
        CHECK(std::abs(mean(na)) < 1e-9);
        CHECK(stddev(na) == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("constant output is degenerate and evaluates to 1.0") {
        CHECK_THROWS_AS(normalize_output(std::vector<double>(170, 4.0)), DegenerateError);
        learner::EvalContext ctx = sys.train_context(0.0);
        BooleanWeights w(sys.train_states.cols(), 0);
        CHECK(learner::evaluate_full(ctx, w, 0) == doctest::Approx(1.0));
    }
}

TEST_CASE("noise statistics: eps spread is linear in sigma_out") {
    const auto cfg = small_config();
    const auto sys = experiments::build_system(cfg);
    const auto w = learner::random_weights(sys.train_states.cols(), 5);

    std::vector<double> sigmas, spreads;
    for (double sigma : {0.002, 0.004, 0.008, 0.016, 0.032}) {
        auto ctx = sys.train_context(sigma);
        ctx.noise.noise_seed = 123;
        std::vector<double> eps;
        for (int rep = 0; rep < 300; ++rep)
            eps.push_back(learner::evaluate_full(ctx, w, rep));
        sigmas.push_back(sigma);
        spreads.push_back(stddev(eps));
    }
    // linear regression through the sweep
    const double ms = mean(sigmas), mp = mean(spreads);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        sxx += (sigmas[i] - ms) * (sigmas[i] - ms);
        sxy += (sigmas[i] - ms) * (spreads[i] - mp);
        syy += (spreads[i] - mp) * (spreads[i] - mp);
    }
    const double r2 = (sxy * sxy) / (sxx * syy);
    CHECK(r2 > 0.99);
}

TEST_CASE("sigma_l is stationary between start and convergence") {
    // Needs the full-size grid: at toy sizes the optimizer prunes a large
    // fraction of the weights, which shifts the raw output scale.
    auto cfg = config::defaults();
    cfg.reservoir.grid_side = 16;
    cfg.task.length = 260;
    cfg.task.test_len = 0;
    const auto sys = experiments::build_system(cfg);
    const int n = sys.train_states.cols();
    auto ctx = sys.train_context(0.0);

    learner::MinimizerConfig mc;
    mc.epochs = 4 * n;
    mc.mode = learner::Mode::greedy;
    mc.selector_seed = 1;
    mc.noise_seed = 2;
    mc.initial_weights = learner::random_weights(n, 3);
    const auto trace = learner::run_minimizer(ctx, mc);

    const auto rep_early = analytics::noise_sensitivity(ctx, mc.initial_weights, 200, 9);
    const auto rep_late = analytics::noise_sensitivity(ctx, trace.final_weights, 200, 9);
    CHECK(rep_early.sigma_l == doctest::Approx(rep_late.sigma_l).epsilon(0.25));
}
