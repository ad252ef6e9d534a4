#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opfact/linalg.hpp"

namespace opfact {

enum class Activation { tanh, relu };

std::string_view to_string(Activation g);
Activation activation_from_string(std::string_view name);
double activate(Activation g, double x);
double activate_derivative(Activation g, double x);

/// Two-layer network R^{M1} -> R^{M2}: x -> W2 g(W1 x + b1) + b2.
struct TwoLayerNet {
    Matrix w1;  // N x M1
    std::vector<double> b1;
    Matrix w2;  // M2 x N
    std::vector<double> b2;
    Activation activation = Activation::tanh;

    std::size_t inputs() const { return w1.cols(); }
    std::size_t hidden() const { return w1.rows(); }
    std::size_t outputs() const { return w2.rows(); }
    std::size_t parameter_count() const;

    // Parameters flattened as [w1, b1, w2, b2], row-major.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> p);

    bool operator==(const TwoLayerNet&) const = default;
};

// Glorot-uniform weights in [-a, a], a = sqrt(6 / (fan_in + fan_out)); zero biases.
TwoLayerNet net_new(std::size_t m1, std::size_t n, std::size_t m2, Activation g, std::uint64_t seed);

std::vector<double> forward(const TwoLayerNet& net, std::span<const double> x);

struct Dataset {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;

    std::size_t size() const { return inputs.size(); }
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> gradient;  // same layout as TwoLayerNet::parameters()
};

// Mean over samples of ||forward(x) - y||^2 / M2, with its exact gradient.
LossGrad loss_grad(const TwoLayerNet& net, const Dataset& data);

struct TrainConfig {
    double step = 1e-2;
    double momentum = 0.9;
    std::size_t epochs = 1000;
    std::uint64_t seed = 0;
    std::size_t restarts = 1;
};

struct RestartOutcome {
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    bool diverged = false;
};

struct TrainResult {
    TwoLayerNet net;
    std::vector<double> history;  // loss before each update, then the final loss
    std::vector<RestartOutcome> restarts;
    std::size_t best_restart = 0;
    bool all_diverged = false;
};

// Full-batch gradient descent with heavy-ball momentum. Restart 0 starts from `net`; restart r > 0
// from net_new with seed derive_seed(config.seed, r). Restarts run concurrently; the result is the
// restart with the lowest final loss (lowest restart index on ties). A restart whose loss becomes
// non-finite is recorded as diverged.
TrainResult train(const TwoLayerNet& net, const Dataset& data, const TrainConfig& config);

// Largest coordinate-wise discrepancy between the analytic gradient and central differences with
// step h, relative to max(|analytic|, |numeric|, 1e-4). Below that floor the error is absolute.
double grad_check(const TwoLayerNet& net, std::span<const double> x, std::span<const double> y, double h);

}  // namespace opfact
