#ifndef RLN_TRAINER_HPP
#define RLN_TRAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rln/data.hpp"
#include "rln/network.hpp"
#include "rln/regularizer.hpp"
#include "rln/rng.hpp"

namespace rln {

enum class Mode { Rln, DnnUniform, Linear };
enum class WeightUpdate { Subgradient, Proximal };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);
std::string weight_update_name(WeightUpdate u);
WeightUpdate weight_update_from_name(const std::string& name);

struct TrainConfig {
    double eta = 1e-2;    // weight learning rate
    double nu = 1e4;      // coefficient learning rate; 0 freezes the coefficients
    double theta = -6.6;  // target mean of the coefficients
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    Norm norm = Norm::L1;
    Mode mode = Mode::Rln;
    WeightUpdate weight_update = WeightUpdate::Proximal;
    std::uint64_t seed = 0;
    double sparsity_epsilon = 0.0;
    std::size_t trajectory_edges = 0; // first-layer edges sampled into the record
};

void validate_config(const TrainConfig& cfg);

/// Coefficient learning rate actually applied for the mode: dnn_uniform and
/// linear freeze the coefficients.
double effective_nu(const TrainConfig& cfg);

struct TrainerState {
    Network net;
    RegCoefficients coeffs;
    std::optional<RegGradientSet> pending_r; // r actually applied by the last weight step
    std::size_t step_index = 0;
    Rng rng;

    TrainerState(Network n, RegCoefficients c, std::uint64_t rng_seed)
        : net(std::move(n)), coeffs(std::move(c)), rng(rng_seed) {}
};

/// One SGD step on the regularized loss, given the empirical gradients for
/// the current batch. Subgradient mode applies -eta * (g + r) exactly;
/// proximal mode (l1 only) soft-thresholds after the empirical step and
/// records the effective r = (w' - w_new) / eta so the same update identity
/// holds. Biases move by -eta * g only.
void weight_step(TrainerState& state, const GradientSet& grads, const TrainConfig& cfg);

/// Convenience overload running backward on the batch first.
void weight_step(TrainerState& state, const Batch& batch, const TrainConfig& cfg);

/// Gradient of the counterfactual loss with respect to one coefficient:
/// -eta * g_next * r, where g_next is the empirical gradient on the next
/// batch at the already-updated weights and r the retained regularization
/// gradient from the step that produced them.
double counterfactual_gradient(double g_next, double r, double eta);

/// Coefficient update from the counterfactual gradient followed by the
/// mean-shift projection. Requires a pending r from a preceding weight step;
/// clears it.
void lambda_step(TrainerState& state, const GradientSet& g_next, const TrainConfig& cfg);

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    std::optional<double> val_loss;
    std::vector<double> zero_fraction; // per layer, |w| <= sparsity_epsilon
};

struct TrainRecord {
    std::vector<EpochStats> epochs;
    std::vector<std::size_t> trajectory_edges; // flat row-major indices into layer 0
    // trajectories[e][t] = (w, lambda) for trajectory_edges[e] at epoch t
    std::vector<std::vector<std::pair<double, double>>> trajectories;
};

void write_record_csv(const TrainRecord& record, std::ostream& out);
void write_trajectory_csv(const TrainRecord& record, std::ostream& out);

struct TrainResult {
    Network net;
    RegCoefficients coeffs;
    TrainRecord record;
};

/// Full interleaved training run over the dataset's training split:
/// per batch pair, a weight step on Z_t, one backward pass on Z_(t+1) at the
/// updated weights, a coefficient step from it, and reuse of that gradient
/// for the next weight step. Coefficients start at theta everywhere.
/// Deterministic for a fixed config.
TrainResult train(const Dataset& ds, const std::vector<LayerSpec>& arch,
                  const TrainConfig& cfg);

/// Ridge-regularized least squares via the same machinery: a single
/// identity layer with uniform l2 coefficients exp(theta).
TrainResult train_linear(const Dataset& ds, const TrainConfig& cfg);

struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
};

/// Extracts coefficients from a single-layer single-output network.
LinearModel as_linear(const Network& net);

/// Layer specs for a relu MLP: hidden widths then a single identity output.
std::vector<LayerSpec> make_mlp_arch(std::size_t input_width,
                                     const std::vector<std::size_t>& hidden);

} // namespace rln

#endif
