#ifndef RLN_ANALYSIS_HPP
#define RLN_ANALYSIS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rln/network.hpp"

namespace rln {

/// Nonnegative per-input-feature weights summing to 1, or flagged all-zero
/// when the network carries no nonzero weight path.
struct ImportanceVector {
    std::vector<double> values;
    bool all_zero = false;
};

/// Layer-chained Garson attribution: per layer, |W| normalized per receiving
/// unit, chained input to output, then normalized to sum 1. Requires a
/// single-output network.
ImportanceVector garson_importance(const Network& net);

/// Shannon entropy in bits, 0 log 0 = 0. Throws NumericError for an
/// all-zero vector (entropy undefined).
double importance_entropy(const ImportanceVector& v);

/// Jensen-Shannon divergence, base 2, in [0, 1].
double js_divergence(const ImportanceVector& p, const ImportanceVector& q);

struct SparsityReport {
    std::vector<double> layer_zero_fraction;
    double network_zero_fraction = 0.0;
    std::size_t eliminated_features = 0;  // inputs with no nonzero outgoing edge
    double eliminated_feature_fraction = 0.0;
    double epsilon = 0.0;
};

/// A weight counts as zero iff |w| <= epsilon (epsilon 0 is meaningful for
/// proximally trained networks).
SparsityReport sparsity_report(const Network& net, double epsilon);

void write_importance_csv(const ImportanceVector& v,
                          const std::vector<std::string>& feature_names, std::ostream& out);

std::string sparsity_summary(const SparsityReport& report);

} // namespace rln

#endif
