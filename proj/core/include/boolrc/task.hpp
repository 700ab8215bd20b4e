#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "boolrc/common.hpp"

namespace boolrc::task {

/// Delay-differential benchmark generator parameters.
/// dx/dt = feedback * x(t-delay) / (1 + x(t-delay)^exponent) - decay * x(t)
struct MackeyGlassParams {
    double feedback_strength = 0.2;
    double decay = 0.1;
    double exponent = 10.0;
    double delay = 17.0;   // time units
    double dt = 0.1;       // integrator step
    int subsample = 30;    // integrator steps per emitted sample
    double x0 = 1.2;       // history level
    double history_perturbation = 1e-3;  // seeded jitter on the history buffer
};

struct TimeSeries {
    std::vector<double> values;
    double dt_effective = 0.0;
};

// One-step-ahead prediction dataset over a normalized series. Targets are the
// series shifted by one: target(n) = u(n+1). Train and test windows are
// disjoint; the first `washout` rows of the train window are excluded from
// error computation downstream.
struct Dataset {
    std::vector<double> u;  // full normalized series, train then test
    int washout = 0;
    int train_len = 0;
    int test_len = 0;

    // Evaluation rows are input indices whose one-step-ahead target exists.
    int train_eval_begin() const { return washout; }
    int train_eval_end() const {
        return std::min(train_len, static_cast<int>(u.size()) - 1);
    }
    int test_eval_begin() const { return train_len; }
    int test_eval_end() const {
        return std::min(train_len + test_len, static_cast<int>(u.size()) - 1);
    }
    // Targets u(n+1) for the evaluation rows of each window.
    std::vector<double> train_targets() const;
    std::vector<double> test_targets() const;
};

// RK4 with linear interpolation into the delay buffer; a transient of
// 10*delay time units is discarded before sampling begins.
TimeSeries generate_mackey_glass(const MackeyGlassParams& params, int length,
                                 std::uint64_t seed);

// Zero mean, unit (population) standard deviation.
TimeSeries normalize(const TimeSeries& series);

Dataset make_dataset(const TimeSeries& series, int washout, int train_len,
                     int test_len);

}  // namespace boolrc::task
