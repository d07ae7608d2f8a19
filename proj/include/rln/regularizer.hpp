#ifndef RLN_REGULARIZER_HPP
#define RLN_REGULARIZER_HPP

#include <string>
#include <vector>

#include "rln/network.hpp"

namespace rln {

enum class Norm { L1, L2 };

std::string norm_name(Norm n);
Norm norm_from_name(const std::string& name);

/// One log-space regularization coefficient per weight. Biases carry none.
/// theta is the target mean enforced by project().
struct RegCoefficients {
    std::vector<Matrix> lambdas; // shape-congruent with the network's weight matrices
    Norm norm = Norm::L1;
    double theta = 0.0;

    std::size_t count() const;
    bool congruent_with(const Network& net) const;
};

/// Gradient of the regularization term with respect to each weight,
/// shape-congruent with the weight matrices.
using RegGradientSet = std::vector<Matrix>;

/// All coefficients initialized to theta.
RegCoefficients uniform_coefficients(const Network& net, Norm norm, double theta);

/// Sum over weights of exp(lambda_i) * |w_i| (l1) or exp(lambda_i) * w_i^2 (l2).
double reg_term(const Network& net, const RegCoefficients& coeffs);

/// exp(lambda_i) * sign(w_i) for l1 (0 at w_i == 0); exp(lambda_i) * 2 w_i for l2.
RegGradientSet reg_gradient(const Network& net, const RegCoefficients& coeffs);

/// Arithmetic mean of all coefficients (compensated sum).
double lambda_mean(const RegCoefficients& coeffs);

/// Mean-shift projection: adds the shared constant theta - mean(lambda),
/// preserving every pairwise difference.
void project(RegCoefficients& coeffs);

} // namespace rln

#endif
