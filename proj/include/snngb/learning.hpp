#pragma once

#include "snngb/network.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace snngb {

enum class GradientMode { adjoint, finite_difference };

struct TrainConfig {
    std::size_t epochs = 200;
    double learning_rate = 1e-2;
    std::size_t window = 0; // 0 trains on the full target range each epoch
    std::uint64_t seed = 0;
    GradientMode gradient_mode = GradientMode::adjoint;

    void validate() const;
};

struct TrainReport {
    double final_train_error = 0.0;
    std::vector<double> error_curve; // loss after each epoch's update
    double elapsed_seconds = 0.0;
};

// Lipschitz constant and ceiling of the squared loss on [-n_f, n_f].
struct LossConstants {
    double lipschitz = 0.0; // 4 n_f
    double ceiling = 0.0;   // 4 n_f^2
};

LossConstants lsq_loss_constants(double n_f) noexcept;

// Mean of (pred - target)^2 over the grid.
double loss_lsq(const Trace& pred, const Trace& target);

// Gradient of J with respect to every weight, given dJ/ds of the output layer
// at every simulated step (step-major, output width per step).
std::vector<Matrix> backpropagate(const NetworkConfig& config, std::span<const Matrix> weights, const Tape& tape,
                                  std::span<const double> input, std::span<const double> output_cotangent);

// Least-squares loss of output channel 0 against `target` over target grid
// points [begin, end). `target` covers a prefix of the network grid.
double fit_loss(const NetworkConfig& config, std::span<const Matrix> weights, std::span<const double> input,
                const Trace& target, std::size_t begin, std::size_t end);

// d loss_lsq / d w for the prefix covered by `target`.
std::vector<Matrix> gradient(const Network& net, const MultiTrace& input, const Trace& target,
                             const TrainConfig& cfg);

// Projected gradient descent; weights stay inside the M_w ball after every step.
std::pair<Network, TrainReport> train(const Network& net, const MultiTrace& input, const Trace& target,
                                      const TrainConfig& cfg);

} // namespace snngb
