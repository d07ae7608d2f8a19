#include "rln/regularizer.hpp"

#include <cmath>

namespace rln {

std::string norm_name(Norm n) { return n == Norm::L1 ? "l1" : "l2"; }

Norm norm_from_name(const std::string& name) {
    if (name == "l1") return Norm::L1;
    if (name == "l2") return Norm::L2;
    throw ConfigError("unknown norm: " + name);
}

std::size_t RegCoefficients::count() const {
    std::size_t n = 0;
    for (const auto& l : lambdas) n += l.size();
    return n;
}

bool RegCoefficients::congruent_with(const Network& net) const {
    if (lambdas.size() != net.layers.size()) return false;
    for (std::size_t k = 0; k < lambdas.size(); ++k)
        if (!lambdas[k].same_shape(net.layers[k].weights)) return false;
    return true;
}

RegCoefficients uniform_coefficients(const Network& net, Norm norm, double theta) {
    RegCoefficients coeffs;
    coeffs.norm = norm;
    coeffs.theta = theta;
    for (const auto& l : net.layers)
        coeffs.lambdas.emplace_back(l.weights.rows(), l.weights.cols(), theta);
    return coeffs;
}

namespace {
void require_congruent(const Network& net, const RegCoefficients& coeffs) {
    if (!coeffs.congruent_with(net))
        throw ConfigError("regularization coefficients are not shape-congruent with the network");
}
} // namespace

double reg_term(const Network& net, const RegCoefficients& coeffs) {
    require_congruent(net, coeffs);
    double acc = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < coeffs.lambdas.size(); ++k) {
        const auto& w = net.layers[k].weights.data();
        const auto& lam = coeffs.lambdas[k].data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] == 0.0) continue; // zero weight contributes nothing for any lambda
            double norm_val = coeffs.norm == Norm::L1 ? std::fabs(w[i]) : w[i] * w[i];
            double term = std::exp(lam[i]) * norm_val;
            double y = term - comp;
            double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
    }
    return acc;
}

RegGradientSet reg_gradient(const Network& net, const RegCoefficients& coeffs) {
    require_congruent(net, coeffs);
    RegGradientSet grads;
    grads.reserve(coeffs.lambdas.size());
    for (std::size_t k = 0; k < coeffs.lambdas.size(); ++k) {
        const auto& w = net.layers[k].weights;
        const auto& lam = coeffs.lambdas[k];
        Matrix g(w.rows(), w.cols());
        for (std::size_t i = 0; i < w.size(); ++i) {
            double wi = w.data()[i];
            if (coeffs.norm == Norm::L1) {
                // subgradient 0 at wi == 0 keeps zeroed weights stationary
                double s = wi > 0.0 ? 1.0 : (wi < 0.0 ? -1.0 : 0.0);
                g.data()[i] = s == 0.0 ? 0.0 : std::exp(lam.data()[i]) * s;
            } else {
                g.data()[i] = std::exp(lam.data()[i]) * 2.0 * wi;
            }
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

double lambda_mean(const RegCoefficients& coeffs) {
    const std::size_t n = coeffs.count();
    if (n == 0) throw ConfigError("lambda_mean on empty coefficients");
    double acc = 0.0, comp = 0.0;
    for (const auto& lam : coeffs.lambdas) {
        for (double v : lam.data()) {
            double y = v - comp;
            double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
    }
    return acc / static_cast<double>(n);
}

void project(RegCoefficients& coeffs) {
    const double shift = coeffs.theta - lambda_mean(coeffs);
    for (auto& lam : coeffs.lambdas)
        for (double& v : lam.data()) v += shift;
}

} // namespace rln
