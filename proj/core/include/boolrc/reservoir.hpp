#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "boolrc/common.hpp"
#include "boolrc/task.hpp"

namespace boolrc::reservoir {

using BooleanWeights = std::vector<std::uint8_t>;

struct ReservoirParams {
    int grid_side = 16;             // N = grid_side^2
    double alpha = 1.0;             // intensity normalization
    double beta = 0.4;              // feedback gain
    double gamma = 0.8;             // injection gain
    double theta0 = 0.39269908169872414;  // pi/8
    double delta_theta = 1.5707963267948966;  // pi/2
    double theta_jitter_std = 0.05;
    double beam_waist = 8.0;        // Gaussian illumination waist, pixels
    double injection_density = 0.5;
    std::uint64_t seed = 1;

    int node_count() const { return grid_side * grid_side; }
};

// Sparse complex coupling over the node grid: entry (i,j) is nonzero only if
// i and j are within Chebyshev distance kernel_radius of each other.
// Compressed row storage.
struct CouplingMatrix {
    int n = 0;
    int kernel_radius = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<std::complex<double>> values;
};

struct InjectionWeights {
    std::vector<double> w;
};

struct NetworkState {
    std::vector<double> fields;       // E_i(n)
    std::vector<double> intensities;  // x_i(n)
    int n = 0;
};

// Readout-plane fields over the evaluation window. Column-major: column i is
// contiguous, so single-weight flips touch one contiguous block. Immutable
// once built.
class StateMatrix {
public:
    StateMatrix() = default;
    StateMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double at(int row, int col) const {
        return data_[static_cast<std::size_t>(col) * rows_ + row];
    }
    double& at_mutable(int row, int col) {
        return data_[static_cast<std::size_t>(col) * rows_ + row];
    }
    const double* column(int col) const {
        return data_.data() + static_cast<std::size_t>(col) * rows_;
    }
    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw_mutable() { return data_; }
    std::uint64_t checksum() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct NoiseParams {
    double sigma_out = 0.0;  // std of additive Gaussian noise on the raw output
    std::uint64_t noise_seed = 0;
};

enum class Window { train, test };

struct IlluminationProfile {
    std::vector<double> e0;  // E0_i, Gaussian beam over the grid
};

IlluminationProfile make_illumination(const ReservoirParams& params);

// Seeded half-Gaussian magnitudes, uniform phases; globally rescaled so the
// mean per-row power sums to one, keeping the cos^2 argument in range.
CouplingMatrix build_coupling(const ReservoirParams& params, int kernel_radius);

InjectionWeights build_injection(const ReservoirParams& params);

std::vector<double> camera_intensity(const NetworkState& state,
                                     const CouplingMatrix& coupling, double alpha);

NetworkState step(const NetworkState& state, double u_next,
                  const ReservoirParams& params, const IlluminationProfile& illum,
                  const std::vector<double>& theta, const CouplingMatrix& coupling,
                  const InjectionWeights& injection);

// Random two-population phase offsets theta0 / theta0 + delta_theta plus jitter.
std::vector<double> build_theta(const ReservoirParams& params);

// Drives the network from a zero-field state through the requested window and
// returns readout-plane fields for the evaluation rows.
StateMatrix run(const ReservoirParams& params, const IlluminationProfile& illum,
                const std::vector<double>& theta, const CouplingMatrix& coupling,
                const InjectionWeights& injection, const task::Dataset& dataset,
                Window window);

// y(n) = (sum_i w_i x_i(n))^2 + xi(n), with the noise stream keyed by
// (noise_seed, epoch, n): fresh noise every evaluation, no shared RNG state.
std::vector<double> readout(const StateMatrix& states, const BooleanWeights& weights,
                            const NoiseParams& noise, std::uint64_t epoch);

// Zero mean, unit std over the evaluation window. Throws DegenerateError on
// zero variance; callers that represent a legal optimizer state (all-zero
// weights) map that to a maximal-error evaluation.
std::vector<double> normalize_output(const std::vector<double>& y);

// Stability probe used to pick the default feedback gain: runs the autonomous
// network (no input) and reports the late-window std of the mean intensity.
double autonomous_spread(const ReservoirParams& params, int steps = 400);

}  // namespace boolrc::reservoir
