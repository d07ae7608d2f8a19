#include "rln/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rln/errors.hpp"

namespace rln {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Rln: return "rln";
        case Mode::DnnUniform: return "dnn_uniform";
        case Mode::Linear: return "linear";
    }
    throw ConfigError("unknown mode");
}

Mode mode_from_name(const std::string& name) {
    if (name == "rln") return Mode::Rln;
    if (name == "dnn_uniform") return Mode::DnnUniform;
    if (name == "linear") return Mode::Linear;
    throw ConfigError("unknown mode: " + name);
}

std::string weight_update_name(WeightUpdate u) {
    return u == WeightUpdate::Subgradient ? "subgradient" : "proximal";
}

WeightUpdate weight_update_from_name(const std::string& name) {
    if (name == "subgradient") return WeightUpdate::Subgradient;
    if (name == "proximal") return WeightUpdate::Proximal;
    throw ConfigError("unknown weight update: " + name);
}

void validate_config(const TrainConfig& cfg) {
    if (!(cfg.eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(cfg.nu >= 0.0)) throw ConfigError("nu must be nonnegative");
    if (!std::isfinite(cfg.theta)) throw ConfigError("theta must be finite");
    if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (cfg.weight_update == WeightUpdate::Proximal && cfg.norm != Norm::L1)
        throw ConfigError("proximal updates require the l1 norm");
    if (!(cfg.sparsity_epsilon >= 0.0)) throw ConfigError("sparsity_epsilon must be nonnegative");
}

double effective_nu(const TrainConfig& cfg) {
    return cfg.mode == Mode::Rln ? cfg.nu : 0.0;
}

namespace {

void check_weights_finite(const Network& net, std::size_t step) {
    if (!net.all_finite())
        throw NumericError("non-finite weight after update at step " + std::to_string(step));
}

} // namespace

void weight_step(TrainerState& state, const GradientSet& grads, const TrainConfig& cfg) {
    validate_config(cfg);
    const std::size_t L = state.net.layers.size();
    if (grads.weights.size() != L || grads.biases.size() != L)
        throw ConfigError("weight_step: gradient set does not match the network");
    if (!state.coeffs.congruent_with(state.net))
        throw ConfigError("weight_step: coefficients do not match the network");

    const double eta = cfg.eta;
    RegGradientSet applied_r;
    applied_r.reserve(L);

    if (cfg.weight_update == WeightUpdate::Subgradient) {
        applied_r = reg_gradient(state.net, state.coeffs);
        for (std::size_t k = 0; k < L; ++k) {
            auto& w = state.net.layers[k].weights.data();
            const auto& g = grads.weights[k].data();
            const auto& r = applied_r[k].data();
            if (g.size() != w.size()) throw ConfigError("weight_step: gradient shape mismatch");
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= eta * (g[i] + r[i]);
        }
    } else {
        for (std::size_t k = 0; k < L; ++k) {
            auto& w = state.net.layers[k].weights.data();
            const auto& g = grads.weights[k].data();
            const auto& lam = state.coeffs.lambdas[k].data();
            if (g.size() != w.size()) throw ConfigError("weight_step: gradient shape mismatch");
            Matrix r_eff(state.net.layers[k].weights.rows(), state.net.layers[k].weights.cols());
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double w_mid = w[i] - eta * g[i];
                const double threshold = eta * std::exp(lam[i]);
                double w_new = std::fabs(w_mid) > threshold
                                   ? (w_mid > 0.0 ? w_mid - threshold : w_mid + threshold)
                                   : 0.0;
                r_eff.data()[i] = (w_mid - w_new) / eta;
                w[i] = w_new;
            }
            applied_r.push_back(std::move(r_eff));
        }
    }

    for (std::size_t k = 0; k < L; ++k) {
        auto& b = state.net.layers[k].bias;
        const auto& gb = grads.biases[k];
        if (gb.size() != b.size()) throw ConfigError("weight_step: bias gradient shape mismatch");
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= eta * gb[i];
    }

    check_weights_finite(state.net, state.step_index);
    state.pending_r = std::move(applied_r);
    ++state.step_index;
}

void weight_step(TrainerState& state, const Batch& batch, const TrainConfig& cfg) {
    BackwardResult br = backward(state.net, batch);
    weight_step(state, br.grads, cfg);
}

double counterfactual_gradient(double g_next, double r, double eta) {
    return -eta * g_next * r;
}

void lambda_step(TrainerState& state, const GradientSet& g_next, const TrainConfig& cfg) {
    validate_config(cfg);
    if (!state.pending_r)
        throw SequencingError("lambda_step without a preceding weight step");
    const RegGradientSet& r = *state.pending_r;
    if (g_next.weights.size() != state.coeffs.lambdas.size())
        throw ConfigError("lambda_step: gradient set does not match the coefficients");

    const double nu = effective_nu(cfg);
    for (std::size_t k = 0; k < state.coeffs.lambdas.size(); ++k) {
        auto& lam = state.coeffs.lambdas[k].data();
        const auto& g = g_next.weights[k].data();
        const auto& rk = r[k].data();
        if (g.size() != lam.size() || rk.size() != lam.size())
            throw ConfigError("lambda_step: shape mismatch");
        for (std::size_t i = 0; i < lam.size(); ++i)
            lam[i] -= nu * counterfactual_gradient(g[i], rk[i], cfg.eta);
    }
    project(state.coeffs);
    for (const auto& lam : state.coeffs.lambdas)
        if (!lam.all_finite())
            throw NumericError("non-finite coefficient after update at step " +
                               std::to_string(state.step_index));
    state.pending_r.reset();
}

namespace {

const char* kCsvFmt = "%.17g";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), kCsvFmt, v);
    return buf;
}

std::vector<double> layer_zero_fractions(const Network& net, double epsilon) {
    std::vector<double> out;
    out.reserve(net.layers.size());
    for (const auto& l : net.layers) {
        std::size_t zeros = 0;
        for (double w : l.weights.data())
            if (std::fabs(w) <= epsilon) ++zeros;
        out.push_back(l.weights.size() == 0
                          ? 0.0
                          : static_cast<double>(zeros) / static_cast<double>(l.weights.size()));
    }
    return out;
}

Batch gather_batch(const Dataset& ds, const std::vector<std::size_t>& order,
                   std::size_t begin, std::size_t end) {
    Batch b;
    b.inputs = Matrix(end - begin, ds.dims());
    b.targets.resize(end - begin);
    for (std::size_t r = begin; r < end; ++r) {
        const double* src = ds.features.row(order[r]);
        std::copy(src, src + ds.dims(), b.inputs.row(r - begin));
        b.targets[r - begin] = ds.targets[order[r]];
    }
    return b;
}

double split_mse(const Network& net, const Dataset& ds, SplitTag tag) {
    auto [x, y] = ds.subset(tag);
    auto pred = forward(net, x);
    return mse_loss(pred, y);
}

} // namespace

void write_record_csv(const TrainRecord& record, std::ostream& out) {
    const std::size_t layers = record.epochs.empty() ? 0 : record.epochs.front().zero_fraction.size();
    out << "epoch,train_loss,val_loss";
    for (std::size_t k = 0; k < layers; ++k) out << ",zero_fraction_layer_" << k;
    out << '\n';
    for (const auto& e : record.epochs) {
        out << e.epoch << ',' << fmt(e.train_loss) << ',';
        if (e.val_loss) out << fmt(*e.val_loss);
        for (double z : e.zero_fraction) out << ',' << fmt(z);
        out << '\n';
    }
}

void write_trajectory_csv(const TrainRecord& record, std::ostream& out) {
    out << "edge_id,epoch,w,lambda\n";
    for (std::size_t e = 0; e < record.trajectory_edges.size(); ++e) {
        for (std::size_t t = 0; t < record.trajectories[e].size(); ++t) {
            out << record.trajectory_edges[e] << ',' << t << ','
                << fmt(record.trajectories[e][t].first) << ','
                << fmt(record.trajectories[e][t].second) << '\n';
        }
    }
}

std::vector<LayerSpec> make_mlp_arch(std::size_t input_width,
                                     const std::vector<std::size_t>& hidden) {
    std::vector<LayerSpec> specs;
    std::size_t in = input_width;
    for (std::size_t h : hidden) {
        specs.push_back({in, h, Activation::Relu, 0.01});
        in = h;
    }
    specs.push_back({in, 1, Activation::Identity, 0.01});
    return specs;
}

TrainResult train(const Dataset& ds, const std::vector<LayerSpec>& arch,
                  const TrainConfig& cfg) {
    validate_config(cfg);
    validate_specs(arch);
    if (arch.front().input_width != ds.dims())
        throw ConfigError("train: architecture input width does not match feature count");
    if (arch.back().output_width != 1 || arch.back().activation != Activation::Identity)
        throw ConfigError("train: final layer must be a single identity output");

    const auto train_idx = ds.indices_of(SplitTag::Train);
    if (train_idx.empty()) throw ConfigError("train: dataset has no training split");
    const bool has_val = ds.count_of(SplitTag::Validation) > 0;

    TrainerState state(init_network(arch, derive_seed(cfg.seed, 0)),
                       RegCoefficients{}, derive_seed(cfg.seed, 1));
    state.coeffs = uniform_coefficients(state.net, cfg.norm, cfg.theta);

    TrainResult result{state.net, state.coeffs, {}};
    const std::size_t layer0_edges = state.net.layers.front().weights.size();
    if (cfg.trajectory_edges > 0) {
        const std::size_t n = std::min(cfg.trajectory_edges, layer0_edges);
        const std::size_t stride = std::max<std::size_t>(1, layer0_edges / n);
        for (std::size_t i = 0; i < n; ++i)
            result.record.trajectory_edges.push_back(i * stride);
        result.record.trajectories.assign(result.record.trajectory_edges.size(), {});
    }

    if (cfg.epochs == 0) return result;

    const std::size_t n_train = train_idx.size();
    const std::size_t batches_per_epoch = (n_train + cfg.batch_size - 1) / cfg.batch_size;

    auto make_epoch_order = [&](Rng& rng) {
        std::vector<std::size_t> order = train_idx;
        rng.shuffle(order);
        return order;
    };

    std::vector<std::size_t> order = make_epoch_order(state.rng);
    std::vector<std::size_t> next_order;

    auto batch_at = [&](const std::vector<std::size_t>& ord, std::size_t b) {
        const std::size_t begin = b * cfg.batch_size;
        const std::size_t end = std::min(begin + cfg.batch_size, n_train);
        return gather_batch(ds, ord, begin, end);
    };

    BackwardResult br;
    try {
        br = backward(state.net, batch_at(order, 0));
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            next_order.clear();
            for (std::size_t b = 0; b < batches_per_epoch; ++b) {
                weight_step(state, br.grads, cfg);

                const bool last_step =
                    (epoch + 1 == cfg.epochs) && (b + 1 == batches_per_epoch);
                if (!last_step) {
                    Batch next;
                    if (b + 1 < batches_per_epoch) {
                        next = batch_at(order, b + 1);
                    } else {
                        next_order = make_epoch_order(state.rng);
                        next = batch_at(next_order, 0);
                    }
                    br = backward(state.net, next);
                    lambda_step(state, br.grads, cfg);
                }
            }

            EpochStats stats;
            stats.epoch = epoch;
            stats.train_loss = split_mse(state.net, ds, SplitTag::Train);
            if (has_val) stats.val_loss = split_mse(state.net, ds, SplitTag::Validation);
            stats.zero_fraction = layer_zero_fractions(state.net, cfg.sparsity_epsilon);
            result.record.epochs.push_back(std::move(stats));
            for (std::size_t e = 0; e < result.record.trajectory_edges.size(); ++e) {
                const std::size_t id = result.record.trajectory_edges[e];
                result.record.trajectories[e].emplace_back(
                    state.net.layers.front().weights.data()[id],
                    state.coeffs.lambdas.front().data()[id]);
            }

            if (!next_order.empty()) order.swap(next_order);
        }
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (epoch " +
                           std::to_string(result.record.epochs.size()) + " of training run)");
    }

    result.net = state.net;
    result.coeffs = state.coeffs;
    return result;
}

TrainResult train_linear(const Dataset& ds, const TrainConfig& cfg) {
    TrainConfig linear_cfg = cfg;
    linear_cfg.mode = Mode::Linear;
    linear_cfg.norm = Norm::L2;
    linear_cfg.weight_update = WeightUpdate::Subgradient;
    std::vector<LayerSpec> arch{{ds.dims(), 1, Activation::Identity, 0.01}};
    return train(ds, arch, linear_cfg);
}

LinearModel as_linear(const Network& net) {
    if (net.layers.size() != 1 || net.output_width() != 1)
        throw ConfigError("as_linear: expected a single-layer, single-output network");
    LinearModel lm;
    lm.weights = net.layers[0].weights.data();
    lm.intercept = net.layers[0].bias[0];
    return lm;
}

} // namespace rln
