#include "rln/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "rln/errors.hpp"

namespace rln {

namespace {

// |W| with every row scaled to sum 1; all-zero rows stay zero.
Matrix row_normalized_abs(const Matrix& w) {
    Matrix a(w.rows(), w.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) total += std::fabs(w(i, j));
        if (total == 0.0) continue;
        for (std::size_t j = 0; j < w.cols(); ++j) a(i, j) = std::fabs(w(i, j)) / total;
    }
    return a;
}

} // namespace

ImportanceVector garson_importance(const Network& net) {
    if (net.layers.empty()) throw ConfigError("garson_importance: empty network");
    if (net.output_width() != 1)
        throw ConfigError("garson_importance: requires a single-output network");

    // Chain the per-layer contribution matrices from input to output.
    Matrix chained = row_normalized_abs(net.layers.front().weights);
    for (std::size_t k = 1; k < net.layers.size(); ++k)
        chained = matmul(row_normalized_abs(net.layers[k].weights), chained);

    ImportanceVector v;
    v.values.assign(net.input_width(), 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < chained.cols(); ++j) {
        v.values[j] = chained(0, j);
        total += v.values[j];
    }
    if (total == 0.0) {
        v.all_zero = true;
        return v;
    }
    for (double& x : v.values) x /= total;
    return v;
}

double importance_entropy(const ImportanceVector& v) {
    if (v.all_zero) throw NumericError("importance_entropy: undefined for an all-zero vector");
    double h = 0.0;
    for (double p : v.values) {
        if (p < 0.0) throw ConfigError("importance_entropy: negative entry");
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double js_divergence(const ImportanceVector& p, const ImportanceVector& q) {
    if (p.values.size() != q.values.size())
        throw ConfigError("js_divergence: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double pi = p.values[i], qi = q.values[i];
        const double mi = 0.5 * (pi + qi);
        if (pi > 0.0) d += 0.5 * pi * std::log2(pi / mi);
        if (qi > 0.0) d += 0.5 * qi * std::log2(qi / mi);
    }
    return d;
}

SparsityReport sparsity_report(const Network& net, double epsilon) {
    SparsityReport report;
    report.epsilon = epsilon;
    std::size_t total = 0, total_zero = 0;
    for (const auto& l : net.layers) {
        std::size_t zeros = 0;
        for (double w : l.weights.data())
            if (std::fabs(w) <= epsilon) ++zeros;
        report.layer_zero_fraction.push_back(
            l.weights.size() == 0 ? 0.0
                                  : static_cast<double>(zeros) /
                                        static_cast<double>(l.weights.size()));
        total += l.weights.size();
        total_zero += zeros;
    }
    report.network_zero_fraction =
        total == 0 ? 0.0 : static_cast<double>(total_zero) / static_cast<double>(total);

    if (!net.layers.empty()) {
        const Matrix& w0 = net.layers.front().weights;
        for (std::size_t j = 0; j < w0.cols(); ++j) {
            bool eliminated = true;
            for (std::size_t i = 0; i < w0.rows(); ++i)
                if (std::fabs(w0(i, j)) > epsilon) { eliminated = false; break; }
            if (eliminated) ++report.eliminated_features;
        }
        report.eliminated_feature_fraction =
            w0.cols() == 0 ? 0.0
                           : static_cast<double>(report.eliminated_features) /
                                 static_cast<double>(w0.cols());
    }
    return report;
}

void write_importance_csv(const ImportanceVector& v,
                          const std::vector<std::string>& feature_names, std::ostream& out) {
    if (!feature_names.empty() && feature_names.size() != v.values.size())
        throw ConfigError("write_importance_csv: name count mismatch");
    out << "feature_name,importance\n";
    char buf[40];
    for (std::size_t j = 0; j < v.values.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", v.values[j]);
        if (feature_names.empty())
            out << "x" << j;
        else
            out << feature_names[j];
        out << ',' << buf << '\n';
    }
}

std::string sparsity_summary(const SparsityReport& report) {
    std::ostringstream out;
    out << "sparsity report (epsilon = " << report.epsilon << ")\n";
    for (std::size_t k = 0; k < report.layer_zero_fraction.size(); ++k)
        out << "  layer " << k << " zero fraction: " << report.layer_zero_fraction[k] << '\n';
    out << "  network zero fraction: " << report.network_zero_fraction << '\n';
    out << "  eliminated input features: " << report.eliminated_features << " ("
        << report.eliminated_feature_fraction << ")\n";
    return out.str();
}

} // namespace rln
