#include "doctest.h"

#include <cmath>

#include "rln/regularizer.hpp"
#include "rln/rng.hpp"
#include "oracles.hpp"

using namespace rln;

namespace {

Network net_with_weights(std::initializer_list<double> ws) {
    Network net;
    Matrix w(1, ws.size());
    std::size_t i = 0;
    for (double v : ws) w(0, i++) = v;
    net.layers.push_back({std::move(w), {0.0}, Activation::Identity, 0.01});
    return net;
}

RegCoefficients coeffs_with(const Network& net, std::initializer_list<double> lambdas,
                            Norm norm, double theta) {
    RegCoefficients c = uniform_coefficients(net, norm, theta);
    std::size_t i = 0;
    for (double v : lambdas) c.lambdas[0].data()[i++] = v;
    return c;
}

} // namespace

TEST_CASE("reg_term basics") {
    Network zeros = net_with_weights({0.0, 0.0, 0.0});
    auto c0 = uniform_coefficients(zeros, Norm::L1, 1.0);
    CHECK(reg_term(zeros, c0) == 0.0);

    Network one = net_with_weights({2.0});
    auto c1 = coeffs_with(one, {0.0}, Norm::L1, 0.0);
    CHECK(reg_term(one, c1) == doctest::Approx(2.0));
}

TEST_CASE("reg_term matches a hand summation") {
    Rng rng(21);
    Network net = net_with_weights({rng.normal(), rng.normal(), rng.normal()});
    RegCoefficients c = uniform_coefficients(net, Norm::L1, 0.0);
    for (double& v : c.lambdas[0].data()) v = rng.uniform(-3, 1);

    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        expected += std::exp(c.lambdas[0].data()[i]) * std::fabs(net.layers[0].weights.data()[i]);
    CHECK(reg_term(net, c) == doctest::Approx(expected).epsilon(1e-12));

    c.norm = Norm::L2;
    expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double w = net.layers[0].weights.data()[i];
        expected += std::exp(c.lambdas[0].data()[i]) * w * w;
    }
    CHECK(reg_term(net, c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uniform coefficients reproduce the shared-lambda term") {
    Rng rng(3);
    Network net = net_with_weights({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    const double lambda = -1.3;
    auto c = uniform_coefficients(net, Norm::L1, lambda);
    double sum_norms = 0.0;
    for (double w : net.layers[0].weights.data()) sum_norms += std::fabs(w);
    CHECK(reg_term(net, c) == doctest::Approx(std::exp(lambda) * sum_norms).epsilon(1e-12));
}

TEST_CASE("reg_gradient closed forms") {
    Network w2 = net_with_weights({2.0});
    CHECK(reg_gradient(w2, coeffs_with(w2, {0.0}, Norm::L1, 0.0))[0](0, 0) ==
          doctest::Approx(1.0));

    Network w0 = net_with_weights({0.0});
    CHECK(reg_gradient(w0, coeffs_with(w0, {5.0}, Norm::L1, 0.0))[0](0, 0) == 0.0);

    Network wm3 = net_with_weights({-3.0});
    CHECK(reg_gradient(wm3, coeffs_with(wm3, {std::log(2.0)}, Norm::L2, 0.0))[0](0, 0) ==
          doctest::Approx(-12.0));
}

TEST_CASE("reg_gradient matches finite differences of reg_term") {
    Rng rng(17);
    Network net = net_with_weights({0.8, -1.2, 0.5, -0.3, 2.1});
    for (Norm norm : {Norm::L1, Norm::L2}) {
        RegCoefficients c = uniform_coefficients(net, norm, 0.0);
        for (double& v : c.lambdas[0].data()) v = rng.uniform(-2, 1);
        auto analytic = reg_gradient(net, c);
        auto fd = oracles::fd_reg_gradient(net, c, 1e-7);
        for (std::size_t i = 0; i < analytic[0].size(); ++i) {
            double a = analytic[0].data()[i], f = fd[0].data()[i];
            CHECK(std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-3}) < 1e-6);
        }
    }
}

TEST_CASE("reg ops reject shape mismatches") {
    Network net = net_with_weights({1.0, 2.0});
    Network other = net_with_weights({1.0, 2.0, 3.0});
    auto c = uniform_coefficients(other, Norm::L1, 0.0);
    CHECK_THROWS_AS(reg_term(net, c), ConfigError);
    CHECK_THROWS_AS(reg_gradient(net, c), ConfigError);
}

TEST_CASE("project examples") {
    Network net = net_with_weights({1.0, 1.0});

    auto equal = coeffs_with(net, {-6.6, -6.6}, Norm::L1, -6.6);
    project(equal);
    CHECK(equal.lambdas[0](0, 0) == doctest::Approx(-6.6));
    CHECK(equal.lambdas[0](0, 1) == doctest::Approx(-6.6));

    auto from_zero = coeffs_with(net, {0.0, 0.0}, Norm::L1, -6.6);
    project(from_zero);
    CHECK(from_zero.lambdas[0](0, 0) == doctest::Approx(-6.6));
    CHECK(from_zero.lambdas[0](0, 1) == doctest::Approx(-6.6));

    auto uneven = coeffs_with(net, {-5.0, -9.0}, Norm::L1, -6.6);
    project(uneven);
    CHECK(uneven.lambdas[0](0, 0) == doctest::Approx(-4.6));
    CHECK(uneven.lambdas[0](0, 1) == doctest::Approx(-8.6));
    CHECK(lambda_mean(uneven) == doctest::Approx(-6.6).epsilon(1e-12));
}

TEST_CASE("project is idempotent and difference preserving") {
    Rng rng(8);
    Network net = net_with_weights({1, 1, 1, 1, 1, 1, 1});
    RegCoefficients c = uniform_coefficients(net, Norm::L1, -6.6);
    for (double& v : c.lambdas[0].data()) v = rng.uniform(-12, 0);
    RegCoefficients before = c;

    project(c);
    CHECK(std::fabs(lambda_mean(c) - c.theta) < 1e-10);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            double orig = before.lambdas[0].data()[i] - before.lambdas[0].data()[j];
            double after = c.lambdas[0].data()[i] - c.lambdas[0].data()[j];
            CHECK(std::fabs(orig - after) < 1e-12);
        }

    RegCoefficients twice = c;
    project(twice);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(std::fabs(twice.lambdas[0].data()[i] - c.lambdas[0].data()[i]) < 1e-12);
}
