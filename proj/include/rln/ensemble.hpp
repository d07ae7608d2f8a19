#ifndef RLN_ENSEMBLE_HPP
#define RLN_ENSEMBLE_HPP

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rln/network.hpp"

namespace rln {

/// Anything that can produce one prediction per input row.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::vector<double> predict(const Matrix& inputs) const = 0;
};

class NetworkPredictor final : public Predictor {
public:
    explicit NetworkPredictor(Network net) : net_(std::move(net)) {}
    std::vector<double> predict(const Matrix& inputs) const override {
        return forward(net_, inputs);
    }
    const Network& net() const { return net_; }

private:
    Network net_;
};

/// Externally produced predictions for a fixed evaluation set; the row
/// count must match at prediction time.
class FixedPredictions final : public Predictor {
public:
    explicit FixedPredictions(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> predict(const Matrix& inputs) const override;

private:
    std::vector<double> values_;
};

struct ModelSet {
    std::vector<std::shared_ptr<const Predictor>> members;

    void add(std::shared_ptr<const Predictor> p) { members.push_back(std::move(p)); }
    std::size_t size() const { return members.size(); }
};

/// Unweighted arithmetic mean of member predictions.
std::vector<double> ensemble_predict(const ModelSet& ms, const Matrix& inputs);

/// Explained variance: 1 - SS_res / SS_tot. Throws on constant targets.
double r2_score(std::span<const double> predictions, std::span<const double> targets);

/// Mean over samples of the across-member population variance.
double prediction_variance(const ModelSet& ms, const Matrix& inputs);

/// One numeric value per line; must hold exactly m rows.
std::vector<double> load_external_predictions(const std::string& path, std::size_t m);

/// Members with the k best validation R² scores, in score order (ties by
/// original member order).
ModelSet select_top_k(const ModelSet& ms, const Matrix& val_inputs,
                      std::span<const double> val_targets, std::size_t k);

/// Metric rows: ensemble_name, R2, variance.
void write_metrics_csv(std::ostream& out,
                       const std::vector<std::tuple<std::string, double, double>>& rows);

} // namespace rln

#endif
