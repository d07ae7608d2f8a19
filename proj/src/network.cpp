#include "rln/network.hpp"

#include <cmath>

#include "rln/rng.hpp"

namespace rln {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Identity: return "identity";
    }
    throw ConfigError("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    if (name == "identity") return Activation::Identity;
    throw ConfigError("unknown activation: " + name);
}

std::size_t Network::weight_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size();
    return n;
}

bool Network::all_finite() const {
    for (const auto& l : layers) {
        if (!l.weights.all_finite()) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

void validate_specs(const std::vector<LayerSpec>& specs) {
    if (specs.empty()) throw ConfigError("network needs at least one layer");
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& s = specs[k];
        if (s.input_width < 1 || s.output_width < 1)
            throw ConfigError("layer " + std::to_string(k) + ": widths must be >= 1");
        if (s.activation == Activation::LeakyRelu &&
            !(s.leaky_slope > 0.0 && s.leaky_slope < 1.0))
            throw ConfigError("layer " + std::to_string(k) + ": leaky slope must be in (0, 1)");
        if (k > 0 && specs[k - 1].output_width != s.input_width)
            throw ConfigError("layer " + std::to_string(k) + ": input width " +
                              std::to_string(s.input_width) + " does not match previous output " +
                              std::to_string(specs[k - 1].output_width));
    }
}

Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    validate_specs(specs);
    Network net;
    Rng rng(seed);
    for (const auto& s : specs) {
        Layer layer;
        layer.activation = s.activation;
        layer.leaky_slope = s.leaky_slope;
        layer.weights = Matrix(s.output_width, s.input_width);
        layer.bias.assign(s.output_width, 0.0);
        const double fan_in = static_cast<double>(s.input_width);
        const double fan_out = static_cast<double>(s.output_width);
        const double std_dev = (s.activation == Activation::Identity)
                                   ? std::sqrt(2.0 / (fan_in + fan_out))
                                   : std::sqrt(2.0 / fan_in);
        for (double& w : layer.weights.data()) w = std_dev * rng.normal();
        net.layers.push_back(std::move(layer));
    }
    return net;
}

namespace {

inline double activate(double z, Activation a, double slope) {
    switch (a) {
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::LeakyRelu: return z > 0.0 ? z : slope * z;
        case Activation::Identity: return z;
    }
    return z;
}

// Derivative with respect to the pre-activation; defined as the lower
// branch at exactly zero.
inline double activate_deriv(double z, Activation a, double slope) {
    switch (a) {
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::LeakyRelu: return z > 0.0 ? 1.0 : slope;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

void check_layer_finite(const Matrix& m, std::size_t layer_index, const char* what) {
    if (!m.all_finite())
        throw NumericError(std::string("non-finite ") + what + " at layer " +
                           std::to_string(layer_index));
}

// inputs (m x in) * W^T (in x out) + bias, then activation.
Matrix layer_forward(const Layer& layer, const Matrix& inputs, Matrix* pre_out) {
    Matrix z = matmul_nt(inputs, layer.weights);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double* row = z.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) row[j] += layer.bias[j];
    }
    if (pre_out) *pre_out = z;
    Matrix a = z;
    if (layer.activation != Activation::Identity) {
        for (double& v : a.data()) v = activate(v, layer.activation, layer.leaky_slope);
    }
    return a;
}

} // namespace

Matrix forward_all(const Network& net, const Matrix& inputs) {
    if (net.layers.empty()) throw ConfigError("forward on empty network");
    if (inputs.cols() != net.input_width())
        throw ConfigError("forward: input width " + std::to_string(inputs.cols()) +
                          " does not match network input " + std::to_string(net.input_width()));
    Matrix act = inputs;
    for (std::size_t k = 0; k < net.layers.size(); ++k)
        act = layer_forward(net.layers[k], act, nullptr);
    return act;
}

std::vector<double> forward(const Network& net, const Matrix& inputs) {
    if (net.output_width() != 1)
        throw ConfigError("forward: prediction requires a single output unit");
    Matrix out = forward_all(net, inputs);
    std::vector<double> pred(out.rows());
    for (std::size_t i = 0; i < out.rows(); ++i) pred[i] = out(i, 0);
    return pred;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size())
        throw ConfigError("mse_loss: length mismatch");
    if (predictions.empty()) throw ConfigError("mse_loss: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double d = predictions[i] - targets[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predictions.size());
}

BackwardResult backward(const Network& net, const Batch& batch) {
    const std::size_t L = net.layers.size();
    if (L == 0) throw ConfigError("backward on empty network");
    if (net.output_width() != 1)
        throw ConfigError("backward: requires a single output unit");
    if (batch.inputs.cols() != net.input_width())
        throw ConfigError("backward: batch width does not match network input");
    if (batch.inputs.rows() != batch.targets.size())
        throw ConfigError("backward: inputs/targets row counts disagree");
    if (batch.inputs.rows() == 0) throw ConfigError("backward: empty batch");

    const std::size_t m = batch.inputs.rows();

    // Forward pass keeping pre-activations and activations per layer.
    std::vector<Matrix> pre(L), act(L);
    {
        const Matrix* in = &batch.inputs;
        for (std::size_t k = 0; k < L; ++k) {
            act[k] = layer_forward(net.layers[k], *in, &pre[k]);
            check_layer_finite(act[k], k, "activation");
            in = &act[k];
        }
    }

    BackwardResult result;
    {
        std::vector<double> predictions(m);
        for (std::size_t i = 0; i < m; ++i) predictions[i] = act[L - 1](i, 0);
        result.loss = mse_loss(predictions, batch.targets);
    }

    result.grads.weights.resize(L);
    result.grads.biases.resize(L);

    // delta starts as dL/d(pre-activation) of the output layer.
    Matrix delta(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        double d = 2.0 * (act[L - 1](i, 0) - batch.targets[i]) / static_cast<double>(m);
        delta(i, 0) = d * activate_deriv(pre[L - 1](i, 0), net.layers[L - 1].activation,
                                         net.layers[L - 1].leaky_slope);
    }

    for (std::size_t k = L; k-- > 0;) {
        const Matrix& layer_input = (k == 0) ? batch.inputs : act[k - 1];
        result.grads.weights[k] = matmul_tn(delta, layer_input);
        check_layer_finite(result.grads.weights[k], k, "weight gradient");

        auto& bias_grad = result.grads.biases[k];
        bias_grad.assign(delta.cols(), 0.0);
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            const double* row = delta.row(i);
            for (std::size_t j = 0; j < delta.cols(); ++j) bias_grad[j] += row[j];
        }

        if (k > 0) {
            Matrix next = matmul(delta, net.layers[k].weights);
            const auto& prev = net.layers[k - 1];
            for (std::size_t i = 0; i < next.rows(); ++i) {
                double* nrow = next.row(i);
                const double* zrow = pre[k - 1].row(i);
                for (std::size_t j = 0; j < next.cols(); ++j)
                    nrow[j] *= activate_deriv(zrow[j], prev.activation, prev.leaky_slope);
            }
            check_layer_finite(next, k - 1, "delta");
            delta = std::move(next);
        }
    }
    return result;
}

} // namespace rln
