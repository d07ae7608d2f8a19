#ifndef RLN_NETWORK_HPP
#define RLN_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rln/matrix.hpp"

namespace rln {

enum class Activation { Relu, LeakyRelu, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct LayerSpec {
    std::size_t input_width = 0;
    std::size_t output_width = 0;
    Activation activation = Activation::Identity;
    double leaky_slope = 0.01; // only read for LeakyRelu, must be in (0, 1)
};

struct Layer {
    Matrix weights; // output_width x input_width
    std::vector<double> bias;
    Activation activation = Activation::Identity;
    double leaky_slope = 0.01;

    std::size_t input_width() const { return weights.cols(); }
    std::size_t output_width() const { return weights.rows(); }
};

/// Dense feedforward network. Immutable during forward/backward; updated
/// only through explicit trainer steps.
struct Network {
    std::vector<Layer> layers;

    std::size_t input_width() const { return layers.empty() ? 0 : layers.front().input_width(); }
    std::size_t output_width() const { return layers.empty() ? 0 : layers.back().output_width(); }
    std::size_t weight_count() const;
    bool all_finite() const;
};

/// One mini-batch of samples. inputs is m x d, targets has m entries.
struct Batch {
    Matrix inputs;
    std::vector<double> targets;
};

/// Per-parameter gradients, shape-congruent with the originating network.
struct GradientSet {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

struct BackwardResult {
    double loss = 0.0;
    GradientSet grads;
};

void validate_specs(const std::vector<LayerSpec>& specs);

/// He-scaled normal init for relu/leaky layers, Glorot-scaled for identity
/// layers; biases zero. Deterministic for a fixed seed.
Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

/// Full affine-then-activation composition; returns the last layer's
/// activations (m x output_width).
Matrix forward_all(const Network& net, const Matrix& inputs);

/// Prediction vector for single-output regression networks.
std::vector<double> forward(const Network& net, const Matrix& inputs);

double mse_loss(std::span<const double> predictions, std::span<const double> targets);

/// Exact reverse-mode gradients of mse_loss over the batch. The network
/// must have a single output unit.
BackwardResult backward(const Network& net, const Batch& batch);

} // namespace rln

#endif
