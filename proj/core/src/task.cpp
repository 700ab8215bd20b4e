#include "boolrc/task.hpp"

#include <cmath>
#include <cstddef>

namespace boolrc::task {

namespace {

double mg_rhs(double x, double x_delayed, const MackeyGlassParams& p) {
    return p.feedback_strength * x_delayed / (1.0 + std::pow(x_delayed, p.exponent)) -
           p.decay * x;
}

}  // namespace

TimeSeries generate_mackey_glass(const MackeyGlassParams& params, int length,
                                 std::uint64_t seed) {
    if (length <= 0) throw ConfigError("generate_mackey_glass: length must be positive");
    if (params.dt <= 0.0) throw ConfigError("generate_mackey_glass: dt must be positive");
    if (params.delay <= 0.0) throw ConfigError("generate_mackey_glass: delay must be positive");
    if (params.subsample < 1) throw ConfigError("generate_mackey_glass: subsample must be >= 1");

    const double ratio = params.delay / params.dt;
    const auto hist_len = static_cast<std::size_t>(std::llround(ratio));
    if (hist_len == 0 || std::abs(ratio - static_cast<double>(hist_len)) > 1e-9)
        throw ConfigError("generate_mackey_glass: delay/dt must be a positive integer");

    // Ring buffer of past grid values; head points at x(t - delay).
    std::vector<double> hist(hist_len);
    for (std::size_t i = 0; i < hist_len; ++i) {
        double jitter = params.history_perturbation *
                        (keyed_uniform(seed, static_cast<std::uint64_t>(i)) - 0.5);
        hist[i] = params.x0 + jitter;
    }
    std::size_t head = 0;
    double x = params.x0;

    const int transient_steps =
        static_cast<int>(std::llround(10.0 * params.delay / params.dt));
    const long long total_steps =
        static_cast<long long>(transient_steps) +
        static_cast<long long>(length) * params.subsample;

    TimeSeries out;
    out.values.reserve(static_cast<std::size_t>(length));
    out.dt_effective = params.dt * params.subsample;

    for (long long step = 0; step < total_steps; ++step) {
        const double xd0 = hist[head];                       // x(t - delay)
        const double xd1 = hist[(head + 1) % hist_len];      // x(t - delay + dt)
        const double xd_half = 0.5 * (xd0 + xd1);            // linear interpolation

        const double k1 = mg_rhs(x, xd0, params);
        const double k2 = mg_rhs(x + 0.5 * params.dt * k1, xd_half, params);
        const double k3 = mg_rhs(x + 0.5 * params.dt * k2, xd_half, params);
        const double k4 = mg_rhs(x + params.dt * k3, xd1, params);
        const double x_next = x + params.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!std::isfinite(x_next))
            throw GenerationError("generate_mackey_glass: numerical overflow");

        hist[head] = x;  // slot now holds the newest value, one delay behind next head
        head = (head + 1) % hist_len;
        x = x_next;

        if (step >= transient_steps &&
            (step - transient_steps + 1) % params.subsample == 0) {
            out.values.push_back(x);
        }
    }
    return out;
}

TimeSeries normalize(const TimeSeries& series) {
    if (series.values.empty()) throw DegenerateError("normalize: empty series");
    const double m = mean(series.values);
    const double s = stddev(series.values);
    if (s <= 0.0) throw DegenerateError("normalize: zero standard deviation");
    TimeSeries out;
    out.dt_effective = series.dt_effective;
    out.values.reserve(series.values.size());
    for (double v : series.values) out.values.push_back((v - m) / s);
    return out;
}

std::vector<double> Dataset::train_targets() const {
    std::vector<double> t;
    for (int n = train_eval_begin(); n < train_eval_end(); ++n)
        t.push_back(u[static_cast<std::size_t>(n) + 1]);
    return t;
}

std::vector<double> Dataset::test_targets() const {
    std::vector<double> t;
    for (int n = test_eval_begin(); n < test_eval_end(); ++n)
        t.push_back(u[static_cast<std::size_t>(n) + 1]);
    return t;
}

Dataset make_dataset(const TimeSeries& series, int washout, int train_len,
                     int test_len) {
    if (washout < 0 || train_len <= 0 || test_len < 0)
        throw SizingError("make_dataset: invalid window sizes");
    if (washout >= train_len)
        throw SizingError("make_dataset: washout must be smaller than train_len");
    const auto size = static_cast<long long>(series.values.size());
    if (test_len > 0) {
        if (size < static_cast<long long>(train_len) + test_len + 2)
            throw SizingError("make_dataset: series too short for requested windows");
    } else if (size < train_len) {
        throw SizingError("make_dataset: series too short for requested windows");
    }

    Dataset ds;
    ds.u = series.values;
    ds.washout = washout;
    ds.train_len = train_len;
    ds.test_len = test_len;
    return ds;
}

}  // namespace boolrc::task
