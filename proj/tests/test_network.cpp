#include "doctest.h"

#include <cmath>

#include "rln/network.hpp"
#include "rln/rng.hpp"
#include "oracles.hpp"

using namespace rln;

namespace {

Network single_layer(Matrix w, std::vector<double> bias, Activation act = Activation::Identity) {
    Network net;
    net.layers.push_back({std::move(w), std::move(bias), act, 0.01});
    return net;
}

Network random_net(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    return init_network(specs, seed);
}

Batch random_batch(std::size_t m, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Batch b;
    b.inputs = Matrix(m, d);
    for (double& v : b.inputs.data()) v = rng.normal();
    b.targets.resize(m);
    for (double& v : b.targets) v = rng.normal();
    return b;
}

bool networks_identical(const Network& a, const Network& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
        if (!(a.layers[k].weights == b.layers[k].weights)) return false;
        if (a.layers[k].bias != b.layers[k].bias) return false;
    }
    return true;
}

} // namespace

TEST_CASE("init_network is deterministic per seed and zero-biased") {
    std::vector<LayerSpec> specs{{2, 3, Activation::Relu, 0.01},
                                 {3, 1, Activation::Identity, 0.01}};
    Network a = init_network(specs, 7);
    Network b = init_network(specs, 7);
    CHECK(networks_identical(a, b));
    Network c = init_network(specs, 8);
    CHECK_FALSE(networks_identical(a, c));

    Network d = init_network({{4, 4, Activation::Identity, 0.01}}, 3);
    for (double bias : d.layers[0].bias) CHECK(bias == 0.0);
}

TEST_CASE("init_network rejects incompatible widths") {
    std::vector<LayerSpec> bad{{2, 3, Activation::Relu, 0.01},
                               {4, 1, Activation::Identity, 0.01}};
    CHECK_THROWS_AS(init_network(bad, 1), ConfigError);
    CHECK_THROWS_AS(init_network({{0, 1, Activation::Identity, 0.01}}, 1), ConfigError);
    CHECK_THROWS_AS(init_network({{2, 2, Activation::LeakyRelu, 1.5}}, 1), ConfigError);
}

TEST_CASE("forward of a single identity layer is the affine map") {
    Matrix w = Matrix::from_rows({{1.0, 2.0}, {-1.0, 0.5}});
    Network net = single_layer(w, {0.25, -0.5});
    Matrix x = Matrix::from_rows({{3.0, 4.0}});
    Matrix out = forward_all(net, x);
    CHECK(out(0, 0) == doctest::Approx(1 * 3 + 2 * 4 + 0.25));
    CHECK(out(0, 1) == doctest::Approx(-1 * 3 + 0.5 * 4 - 0.5));
}

TEST_CASE("forward of an all-zero network predicts zero") {
    Network net = single_layer(Matrix(1, 3), {0.0});
    Matrix x = Matrix::from_rows({{5.0, -2.0, 9.0}});
    auto pred = forward(net, x);
    CHECK(pred[0] == 0.0);
}

TEST_CASE("relu clips negative pre-activations") {
    Matrix w = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    Network net = single_layer(w, {0.0, 0.0}, Activation::Relu);
    Matrix x = Matrix::from_rows({{-1.0, 2.0}});
    Matrix out = forward_all(net, x);
    CHECK(out(0, 0) == 0.0);
    CHECK(out(0, 1) == 2.0);
}

TEST_CASE("forward rejects mismatched widths") {
    Network net = single_layer(Matrix(1, 3), {0.0});
    CHECK_THROWS_AS(forward(net, Matrix(2, 4)), ConfigError);
}

TEST_CASE("mse_loss basics") {
    std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(mse_loss(a, a) == 0.0);
    std::vector<double> p{1.0, 1.0}, y{0.0, 2.0};
    CHECK(mse_loss(p, y) == doctest::Approx(1.0));
    CHECK_THROWS_AS(mse_loss(p, a), ConfigError);
}

TEST_CASE("mse_loss matches direct summation on random vectors") {
    Rng rng(99);
    std::vector<double> p(100), y(100);
    for (auto& v : p) v = rng.uniform(-5, 5);
    for (auto& v : y) v = rng.uniform(-5, 5);
    CHECK(mse_loss(p, y) == doctest::Approx(oracles::mse_direct(p, y)).epsilon(1e-12));
}

TEST_CASE("mse_loss is nonnegative, zero only at equality") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> p(8), y(8);
        for (auto& v : p) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        double loss = mse_loss(p, y);
        CHECK(loss >= 0.0);
        if (p != y) CHECK(loss > 0.0);
    }
}

TEST_CASE("backward: zero residual means zero gradients") {
    Matrix w = Matrix::from_rows({{2.0, -1.0}});
    Network net = single_layer(w, {0.5});
    Batch batch;
    batch.inputs = Matrix::from_rows({{1.0, 3.0}});
    batch.targets = {2.0 * 1 - 1 * 3 + 0.5};
    auto res = backward(net, batch);
    CHECK(res.loss == doctest::Approx(0.0));
    for (double g : res.grads.weights[0].data()) CHECK(g == doctest::Approx(0.0));
    CHECK(res.grads.biases[0][0] == doctest::Approx(0.0));
}

TEST_CASE("backward: one-layer closed form") {
    Matrix w = Matrix::from_rows({{0.3, -0.7}});
    Network net = single_layer(w, {0.1});
    Batch batch;
    batch.inputs = Matrix::from_rows({{2.0, -1.0}});
    batch.targets = {1.0};
    double pred = 0.3 * 2 + 0.7 * 1 + 0.1;
    auto res = backward(net, batch);
    // dL/dW = 2 (pred - y) x^T for a single sample
    CHECK(res.grads.weights[0](0, 0) == doctest::Approx(2 * (pred - 1.0) * 2.0));
    CHECK(res.grads.weights[0](0, 1) == doctest::Approx(2 * (pred - 1.0) * -1.0));
    CHECK(res.grads.biases[0][0] == doctest::Approx(2 * (pred - 1.0)));
}

TEST_CASE("backward matches finite differences on random 2-4-1 nets") {
    std::vector<LayerSpec> specs{{2, 4, Activation::Relu, 0.01},
                                 {4, 1, Activation::Identity, 0.01}};
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 5 && seed < 40; ++seed) {
        Network net = random_net(specs, seed);
        Batch batch = random_batch(6, 2, seed + 100);
        if (oracles::near_kink(net, batch.inputs, 1e-3)) continue;
        ++checked;
        auto analytic = backward(net, batch);
        auto fd = oracles::fd_gradient(net, batch, 1e-6);
        double max_rel = 0.0;
        for (std::size_t k = 0; k < specs.size(); ++k) {
            for (std::size_t i = 0; i < fd.weights[k].size(); ++i) {
                double a = analytic.grads.weights[k].data()[i];
                double f = fd.weights[k].data()[i];
                max_rel = std::max(max_rel,
                                   std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-3}));
            }
            for (std::size_t i = 0; i < fd.biases[k].size(); ++i) {
                double a = analytic.grads.biases[k][i];
                double f = fd.biases[k][i];
                max_rel = std::max(max_rel,
                                   std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-3}));
            }
        }
        CHECK(max_rel < 1e-6);
    }
    CHECK(checked == 5);
}

TEST_CASE("forward is positively homogeneous through bias-free relu layers") {
    std::vector<LayerSpec> specs{{3, 5, Activation::Relu, 0.01},
                                 {5, 4, Activation::Relu, 0.01},
                                 {4, 1, Activation::Identity, 0.01}};
    Network net = random_net(specs, 11);
    for (auto& layer : net.layers) std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
    Matrix x = random_batch(4, 3, 77).inputs;
    const double c = 1.7;
    Network scaled = net;
    for (auto& layer : scaled.layers)
        for (double& w : layer.weights.data()) w *= c;
    auto base = forward(net, x);
    auto big = forward(scaled, x);
    const double factor = c * c * c;
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(big[i] == doctest::Approx(factor * base[i]).epsilon(1e-12));
}

TEST_CASE("backward reports the offending layer on overflow") {
    Matrix w0(2, 2);
    w0(0, 0) = 1e308; w0(0, 1) = 1e308; w0(1, 0) = 1.0; w0(1, 1) = 1.0;
    Network net;
    net.layers.push_back({w0, {0.0, 0.0}, Activation::Identity, 0.01});
    net.layers.push_back({Matrix::from_rows({{1e308, 1e308}}), {0.0}, Activation::Identity, 0.01});
    Batch batch;
    batch.inputs = Matrix::from_rows({{1e5, 1e5}});
    batch.targets = {0.0};
    CHECK_THROWS_WITH_AS(backward(net, batch),
                         doctest::Contains("layer"), NumericError);
}
