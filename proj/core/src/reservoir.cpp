#include "boolrc/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

namespace boolrc::reservoir {

std::uint64_t StateMatrix::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : data_) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        h ^= bits;
        h *= 0x100000001b3ULL;
    }
    return h;
}

IlluminationProfile make_illumination(const ReservoirParams& params) {
    const int side = params.grid_side;
    if (side < 2) throw ConfigError("reservoir: grid_side must be >= 2");
    IlluminationProfile p;
    p.e0.resize(static_cast<std::size_t>(side) * side);
    const double c = (side - 1) / 2.0;
    const double w2 = 2.0 * params.beam_waist * params.beam_waist;
    for (int r = 0; r < side; ++r) {
        for (int col = 0; col < side; ++col) {
            double d2 = (r - c) * (r - c) + (col - c) * (col - c);
            p.e0[static_cast<std::size_t>(r) * side + col] = std::exp(-d2 / w2);
        }
    }
    return p;
}

CouplingMatrix build_coupling(const ReservoirParams& params, int kernel_radius) {
    if (kernel_radius < 0) throw ConfigError("build_coupling: kernel_radius must be >= 0");
    const int side = params.grid_side;
    const int n = params.node_count();

    CouplingMatrix m;
    m.n = n;
    m.kernel_radius = kernel_radius;
    m.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
    m.row_ptr.push_back(0);

    std::mt19937_64 rng(derive_seed(params.seed, "doe"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi);

    double total_power = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ri = i / side;
        const int ci = i % side;
        for (int rj = std::max(0, ri - kernel_radius); rj <= std::min(side - 1, ri + kernel_radius); ++rj) {
            for (int cj = std::max(0, ci - kernel_radius); cj <= std::min(side - 1, ci + kernel_radius); ++cj) {
                const double mag = std::abs(gauss(rng));
                const double phase = uphase(rng);
                m.col_idx.push_back(rj * side + cj);
                m.values.push_back(std::polar(mag, phase));
                total_power += mag * mag;
            }
        }
        m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
    }

    // Mean per-row power -> 1.
    const double scale = 1.0 / std::sqrt(total_power / n);
    for (auto& v : m.values) v *= scale;
    return m;
}

InjectionWeights build_injection(const ReservoirParams& params) {
    if (params.injection_density <= 0.0 || params.injection_density > 1.0)
        throw ConfigError("build_injection: injection_density must be in (0,1]");
    const int n = params.node_count();
    InjectionWeights w;
    w.w.assign(static_cast<std::size_t>(n), 0.0);
    std::mt19937_64 rng(derive_seed(params.seed, "inj"));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> uval(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        if (u01(rng) < params.injection_density) w.w[i] = uval(rng);
    }
    return w;
}

std::vector<double> build_theta(const ReservoirParams& params) {
    const int n = params.node_count();
    std::vector<double> theta(static_cast<std::size_t>(n));
    std::mt19937_64 rng(derive_seed(params.seed, "theta"));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double base = (u01(rng) < 0.5) ? params.theta0 : params.theta0 + params.delta_theta;
        theta[i] = base + params.theta_jitter_std * jitter(rng);
    }
    return theta;
}

std::vector<double> camera_intensity(const NetworkState& state,
                                     const CouplingMatrix& coupling, double alpha) {
    if (static_cast<int>(state.fields.size()) != coupling.n)
        throw DimensionError("camera_intensity: state/coupling size mismatch");
    std::vector<double> out(static_cast<std::size_t>(coupling.n));
    for (int i = 0; i < coupling.n; ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = coupling.row_ptr[i]; k < coupling.row_ptr[i + 1]; ++k) {
            acc += coupling.values[k] * state.fields[coupling.col_idx[k]];
        }
        out[i] = alpha * std::norm(acc);
    }
    return out;
}

NetworkState step(const NetworkState& state, double u_next,
                  const ReservoirParams& params, const IlluminationProfile& illum,
                  const std::vector<double>& theta, const CouplingMatrix& coupling,
                  const InjectionWeights& injection) {
    const auto cam = camera_intensity(state, coupling, params.alpha);
    const int n = coupling.n;
    NetworkState next;
    next.n = state.n + 1;
    next.fields.resize(static_cast<std::size_t>(n));
    next.intensities.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double phi = params.beta * cam[i] +
                           params.gamma * injection.w[i] * u_next + theta[i];
        const double c = std::cos(phi);
        next.fields[i] = illum.e0[i] * c;
        next.intensities[i] = params.alpha * illum.e0[i] * illum.e0[i] * c * c;
    }
    return next;
}

StateMatrix run(const ReservoirParams& params, const IlluminationProfile& illum,
                const std::vector<double>& theta, const CouplingMatrix& coupling,
                const InjectionWeights& injection, const task::Dataset& dataset,
                Window window) {
    const int n = coupling.n;
    const int eval_begin = (window == Window::train) ? dataset.train_eval_begin()
                                                     : dataset.test_eval_begin();
    const int eval_end = (window == Window::train) ? dataset.train_eval_end()
                                                   : dataset.test_eval_end();
    if (eval_end <= eval_begin) throw SizingError("run: empty evaluation window");

    StateMatrix out(eval_end - eval_begin, n);
    NetworkState state;
    state.fields.assign(static_cast<std::size_t>(n), 0.0);
    state.intensities.assign(static_cast<std::size_t>(n), 0.0);

    // Drive from the start of the series so the test window continues the
    // trajectory established during training.
    for (int step_idx = 0; step_idx < eval_end; ++step_idx) {
        state = step(state, dataset.u[step_idx], params, illum, theta, coupling, injection);
        if (step_idx >= eval_begin) {
            const int row = step_idx - eval_begin;
            for (int i = 0; i < n; ++i)
                out.at_mutable(row, i) = illum.e0[i] - state.fields[i];
        }
    }
    return out;
}

std::vector<double> readout(const StateMatrix& states, const BooleanWeights& weights,
                            const NoiseParams& noise, std::uint64_t epoch) {
    if (static_cast<int>(weights.size()) != states.cols())
        throw DimensionError("readout: weight length does not match state columns");
    const int rows = states.rows();
    std::vector<double> y(static_cast<std::size_t>(rows), 0.0);
    for (int col = 0; col < states.cols(); ++col) {
        if (!weights[col]) continue;
        const double* c = states.column(col);
        for (int r = 0; r < rows; ++r) y[r] += c[r];
    }
    for (int r = 0; r < rows; ++r) {
        y[r] = y[r] * y[r];
        if (noise.sigma_out > 0.0)
            y[r] += noise.sigma_out * keyed_gaussian(noise.noise_seed, epoch, r);
    }
    return y;
}

std::vector<double> normalize_output(const std::vector<double>& y) {
    const double m = mean(y);
    const double s = stddev(y);
    if (s <= 0.0) throw DegenerateError("normalize_output: zero output variance");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (y[i] - m) / s;
    return out;
}

double autonomous_spread(const ReservoirParams& params, int steps) {
    const auto illum = make_illumination(params);
    const auto theta = build_theta(params);
    const auto coupling = build_coupling(params, 2);
    const auto injection = build_injection(params);

    NetworkState state;
    state.fields.assign(static_cast<std::size_t>(params.node_count()), 0.0);
    state.intensities.assign(static_cast<std::size_t>(params.node_count()), 0.0);
    std::vector<double> trace;
    for (int s = 0; s < steps; ++s) {
        state = step(state, 0.0, params, illum, theta, coupling, injection);
        if (s >= steps / 2) trace.push_back(mean(state.intensities));
    }
    return stddev(trace);
}

}  // namespace boolrc::reservoir
