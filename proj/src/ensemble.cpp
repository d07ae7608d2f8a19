#include "rln/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <tuple>

#include "rln/errors.hpp"

namespace rln {

std::vector<double> FixedPredictions::predict(const Matrix& inputs) const {
    if (inputs.rows() != values_.size())
        throw ConfigError("fixed predictions: expected " + std::to_string(values_.size()) +
                          " rows, got " + std::to_string(inputs.rows()));
    return values_;
}

std::vector<double> ensemble_predict(const ModelSet& ms, const Matrix& inputs) {
    if (ms.members.empty()) throw ConfigError("ensemble_predict: empty model set");
    std::vector<double> mean(inputs.rows(), 0.0);
    for (const auto& member : ms.members) {
        auto pred = member->predict(inputs);
        if (pred.size() != mean.size())
            throw ConfigError("ensemble_predict: member prediction size mismatch");
        for (std::size_t i = 0; i < pred.size(); ++i) mean[i] += pred[i];
    }
    const double inv = 1.0 / static_cast<double>(ms.members.size());
    for (double& v : mean) v *= inv;
    return mean;
}

double r2_score(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw ConfigError("r2_score: length mismatch");
    if (predictions.size() < 2) throw ConfigError("r2_score: needs at least 2 samples");
    double mean = 0.0;
    for (double y : targets) mean += y;
    mean /= static_cast<double>(targets.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        ss_tot += (targets[i] - mean) * (targets[i] - mean);
        ss_res += (targets[i] - predictions[i]) * (targets[i] - predictions[i]);
    }
    if (ss_tot == 0.0) throw NumericError("r2_score: undefined for constant targets");
    return 1.0 - ss_res / ss_tot;
}

double prediction_variance(const ModelSet& ms, const Matrix& inputs) {
    if (ms.members.size() < 2)
        throw ConfigError("prediction_variance: needs at least 2 members");
    const std::size_t m = inputs.rows();
    std::vector<std::vector<double>> preds;
    preds.reserve(ms.members.size());
    for (const auto& member : ms.members) {
        preds.push_back(member->predict(inputs));
        if (preds.back().size() != m)
            throw ConfigError("prediction_variance: member prediction size mismatch");
    }
    const double k = static_cast<double>(preds.size());
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0.0;
        for (const auto& p : preds) mean += p[i];
        mean /= k;
        double var = 0.0;
        for (const auto& p : preds) var += (p[i] - mean) * (p[i] - mean);
        total += var / k;
    }
    return m == 0 ? 0.0 : total / static_cast<double>(m);
}

std::vector<double> load_external_predictions(const std::string& path, std::size_t m) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric entry");
        }
        if (pos != line.size())
            throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric entry");
        values.push_back(v);
    }
    if (values.size() != m)
        throw DataError(path + ": expected " + std::to_string(m) + " rows, got " +
                        std::to_string(values.size()));
    return values;
}

ModelSet select_top_k(const ModelSet& ms, const Matrix& val_inputs,
                      std::span<const double> val_targets, std::size_t k) {
    if (ms.members.empty()) throw ConfigError("select_top_k: empty model set");
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(ms.members.size());
    for (std::size_t i = 0; i < ms.members.size(); ++i) {
        auto pred = ms.members[i]->predict(val_inputs);
        scored.emplace_back(r2_score(pred, val_targets), i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    ModelSet out;
    for (std::size_t i = 0; i < std::min(k, scored.size()); ++i)
        out.add(ms.members[scored[i].second]);
    return out;
}

void write_metrics_csv(std::ostream& out,
                       const std::vector<std::tuple<std::string, double, double>>& rows) {
    out << "ensemble_name,r2,variance\n";
    char buf[40];
    for (const auto& [name, r2, var] : rows) {
        out << name << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", r2);
        out << buf << ',';
        if (std::isnan(var))
            out << "";
        else {
            std::snprintf(buf, sizeof(buf), "%.17g", var);
            out << buf;
        }
        out << '\n';
    }
}

} // namespace rln
