// rln: train, evaluate, and analyze regularization learning networks on
// tabular data, plus the synthetic benchmark harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rln/analysis.hpp"
#include "rln/data.hpp"
#include "rln/ensemble.hpp"
#include "rln/errors.hpp"
#include "rln/experiment.hpp"
#include "rln/model_io.hpp"
#include "rln/trainer.hpp"

namespace fs = std::filesystem;
using namespace rln;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw ConfigError("bad numeric list entry: '" + item + "'");
    }
    if (out.empty()) throw ConfigError("empty numeric list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        long v = std::stol(item);
        if (v < 1) throw ConfigError("list entries must be positive: '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// "50,10;20" -> {{50,10},{20}}; the token "-" stands for no hidden layers
std::vector<std::vector<std::size_t>> parse_arch_list(const std::string& text) {
    std::vector<std::vector<std::size_t>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item == "-")
            out.push_back({});
        else
            out.push_back(parse_size_list(item));
    }
    if (out.empty()) throw ConfigError("empty architecture list");
    return out;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw DataError("cannot create output directory " + path + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << content;
}

// Section header plus flat key=value lines; read back through the top-level
// --config option.
void persist_effective_config(const CLI::App* sub, const std::string& out_dir) {
    write_text(out_dir + "/effective_config.ini",
               "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false));
}

// Options shared by every training-style command.
struct TrainFlags {
    TrainConfig cfg;
    std::string norm = "l1";
    std::string mode = "rln";
    std::string update = "proximal";
    std::string hidden = "50,10";

    void attach(CLI::App* sub) {
        sub->add_option("--eta", cfg.eta, "weight learning rate")->capture_default_str();
        sub->add_option("--nu", cfg.nu, "coefficient learning rate (0 freezes the coefficients)")
            ->capture_default_str();
        sub->add_option("--theta", cfg.theta, "target mean of the log regularization coefficients")
            ->capture_default_str();
        sub->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
        sub->add_option("--batch", cfg.batch_size, "mini-batch size")->capture_default_str();
        sub->add_option("--norm", norm, "weight norm: l1 or l2")->capture_default_str();
        sub->add_option("--mode", mode, "model family: rln, dnn_uniform, or linear")
            ->capture_default_str();
        sub->add_option("--update", update, "weight update rule: proximal or subgradient")
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "training seed")->capture_default_str();
        sub->add_option("--sparsity-epsilon", cfg.sparsity_epsilon,
                        "zero-weight threshold for sparsity reporting")
            ->capture_default_str();
        sub->add_option("--hidden", hidden,
                        "hidden layer widths, comma separated (ignored for linear mode)")
            ->capture_default_str();
    }

    TrainConfig resolve() const {
        TrainConfig out = cfg;
        out.norm = norm_from_name(norm);
        out.mode = mode_from_name(mode);
        out.weight_update = weight_update_from_name(update);
        if (out.mode == Mode::Linear) {
            out.norm = Norm::L2;
            out.weight_update = WeightUpdate::Subgradient;
        }
        validate_config(out);
        return out;
    }
};

struct DataFlags {
    std::string data_path;
    std::string target = "target";
    std::string missing = "reject";
    double train_frac = 1.0;
    double val_frac = 0.0;
    double test_frac = 0.0;
    std::uint64_t split_seed = 0;
    bool standardize_features = false;

    void attach(CLI::App* sub, bool with_split = true) {
        sub->add_option("--data", data_path, "input CSV file")->required();
        sub->add_option("--target", target, "target column name")->capture_default_str();
        sub->add_option("--missing", missing, "missing-cell policy: reject or impute")
            ->capture_default_str();
        if (with_split) {
            sub->add_option("--train-frac", train_frac, "training fraction")->capture_default_str();
            sub->add_option("--val-frac", val_frac, "validation fraction")->capture_default_str();
            sub->add_option("--test-frac", test_frac, "test fraction")->capture_default_str();
            sub->add_option("--split-seed", split_seed, "split shuffle seed")
                ->capture_default_str();
            sub->add_flag("--standardize", standardize_features,
                          "standardize features with training-split statistics");
        }
    }

    MissingPolicy policy() const {
        if (missing == "reject") return MissingPolicy::RejectRow;
        if (missing == "impute") return MissingPolicy::MeanImpute;
        throw ConfigError("unknown missing policy: " + missing);
    }
};

struct GridFlags {
    std::string etas = "1e-3,1e-2";
    std::string nus = "1e3,1e4,1e5";
    std::string thetas = "-8,-6,-4";
    std::string archs = "50,10";
    std::string batches = "32";
    std::string epoch_grid = "100";

    void attach(CLI::App* sub) {
        sub->add_option("--etas", etas, "grid of weight learning rates")->capture_default_str();
        sub->add_option("--nus", nus, "grid of coefficient learning rates")->capture_default_str();
        sub->add_option("--thetas", thetas, "grid of theta values")->capture_default_str();
        sub->add_option("--archs", archs,
                        "grid of hidden architectures, ';' separated ('-' = none)")
            ->capture_default_str();
        sub->add_option("--batches", batches, "grid of batch sizes")->capture_default_str();
        sub->add_option("--epoch-grid", epoch_grid, "grid of epoch counts")->capture_default_str();
    }

    Grid resolve() const {
        Grid g;
        g.etas = parse_double_list(etas);
        g.nus = parse_double_list(nus);
        g.thetas = parse_double_list(thetas);
        g.archs = parse_arch_list(archs);
        g.batch_sizes = parse_size_list(batches);
        g.epoch_counts = parse_size_list(epoch_grid);
        if (g.batch_sizes.empty() || g.epoch_counts.empty())
            throw ConfigError("batch and epoch grids need at least one value");
        g.validate();
        return g;
    }
};

Dataset load_and_split(const DataFlags& flags) {
    Dataset ds = load_csv(flags.data_path, flags.target, flags.policy());
    return split_dataset(ds, flags.train_frac, flags.val_frac, flags.test_frac,
                         flags.split_seed);
}

std::string best_config_ini(const GridSearchResult& gs, const TrainConfig& cfg) {
    std::ostringstream out;
    out << "# best grid point, usable with: rln train --config <this file>\n";
    out << "[train]\n";
    out << "mode=" << mode_name(cfg.mode) << '\n';
    out << "hidden=";
    for (std::size_t i = 0; i < gs.best_arch.size(); ++i)
        out << (i ? "," : "") << gs.best_arch[i];
    out << '\n';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.eta);
    out << "eta=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.nu);
    out << "nu=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.theta);
    out << "theta=" << buf << '\n';
    out << "batch=" << cfg.batch_size << '\n';
    out << "epochs=" << cfg.epochs << '\n';
    out << "norm=" << norm_name(cfg.norm) << '\n';
    out << "update=" << weight_update_name(cfg.weight_update) << '\n';
    out << "seed=" << cfg.seed << '\n';
    return out.str();
}

// ---- synth ----------------------------------------------------------------

struct SynthCmd {
    SynthConfig cfg;
    std::string out_dir;
    std::string target_name = "target";
    CLI::App* sub = nullptr;

    void attach(CLI::App& app) {
        sub = app.add_subcommand("synth", "generate a synthetic tabular dataset");
        sub->add_option("--samples", cfg.n_samples, "number of samples")->capture_default_str();
        sub->add_option("--features", cfg.n_features, "number of features")->capture_default_str();
        sub->add_option("--informative", cfg.n_informative, "number of informative features")
            ->capture_default_str();
        sub->add_option("--decay", cfg.decay, "geometric importance decay in (0,1]")
            ->capture_default_str();
        sub->add_option("--interactions", cfg.interaction_pairs, "pairwise interaction terms")
            ->capture_default_str();
        sub->add_option("--noise-r2", cfg.noise_r2, "noise share of target variance, [0,1)")
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
        sub->add_option("--target-name", target_name, "target column name")->capture_default_str();
        sub->add_option("--out", out_dir, "output directory")->required();
    }

    int run() const {
        SynthData sd = synth_generate(cfg);
        ensure_dir(out_dir);
        write_csv_file(sd.dataset, out_dir + "/data.csv", target_name);
        write_synth_meta(sd.meta, out_dir + "/meta.json");
        persist_effective_config(sub, out_dir);
        std::cout << "wrote " << out_dir << "/data.csv (" << sd.dataset.rows() << " x "
                  << sd.dataset.dims() << ") and " << out_dir << "/meta.json\n";
        return 0;
    }
};

// ---- train ----------------------------------------------------------------

struct TrainCmd {
    DataFlags data;
    TrainFlags train_flags;
    std::size_t trajectory_edges = 0;
    std::string out_dir;
    CLI::App* sub = nullptr;

    void attach(CLI::App& app) {
        sub = app.add_subcommand("train", "train a model on a CSV dataset");
        data.attach(sub);
        train_flags.attach(sub);
        sub->add_option("--trajectory-edges", trajectory_edges,
                        "number of first-layer edges to record per epoch")
            ->capture_default_str();
        sub->add_option("--out", out_dir, "output directory")->required();
    }

    int run() {
        TrainConfig cfg = train_flags.resolve();
        cfg.trajectory_edges = trajectory_edges;
        Dataset ds = load_and_split(data);
        std::optional<Scaler> scaler;
        if (data.standardize_features) {
            auto [scaled, s] = standardize(ds);
            ds = std::move(scaled);
            scaler = std::move(s);
        }

        TrainResult result =
            cfg.mode == Mode::Linear
                ? train_linear(ds, cfg)
                : train(ds, make_mlp_arch(ds.dims(), parse_size_list(train_flags.hidden)), cfg);

        ensure_dir(out_dir);
        ModelDocument doc{result.net, result.coeffs, cfg, scaler};
        save_model(doc, out_dir + "/model.json");
        {
            std::ofstream record(out_dir + "/record.csv");
            write_record_csv(result.record, record);
        }
        if (!result.record.trajectory_edges.empty()) {
            std::ofstream traj(out_dir + "/trajectory.csv");
            write_trajectory_csv(result.record, traj);
        }
        persist_effective_config(sub, out_dir);

        auto [train_x, train_y] = ds.subset(SplitTag::Train);
        auto pred = forward(result.net, train_x);
        std::cout << "train mse " << mse_loss(pred, train_y);
        if (train_y.size() >= 2) {
            bool constant = true;
            for (double y : train_y)
                if (y != train_y.front()) constant = false;
            if (!constant) std::cout << ", train r2 " << r2_score(pred, train_y);
        }
        std::cout << "\nwrote " << out_dir << "/model.json\n";
        return 0;
    }
};

// ---- eval -----------------------------------------------------------------

struct EvalCmd {
    DataFlags data;
    std::vector<std::string> model_paths;
    std::vector<std::string> external_paths;
    std::string out_dir;
    CLI::App* sub = nullptr;

    void attach(CLI::App& app) {
        sub = app.add_subcommand("eval", "evaluate one model or an ensemble on a CSV dataset");
        data.attach(sub, false);
        sub->add_option("--model", model_paths, "model file (repeat for an ensemble)");
        sub->add_option("--external", external_paths,
                        "externally produced prediction file, one value per line");
        sub->add_option("--out", out_dir, "output directory for metrics.csv")->required();
    }

    int run() const {
        if (model_paths.empty() && external_paths.empty())
            throw ConfigError("eval needs at least one --model or --external");
        Dataset ds = load_csv(data.data_path, data.target, data.policy());

        ModelSet ms;
        std::string name;
        for (const auto& path : model_paths) {
            ModelDocument doc = load_model(path);
            if (doc.net.input_width() != ds.dims())
                throw DataError("model " + path + " expects " +
                                std::to_string(doc.net.input_width()) + " features, data has " +
                                std::to_string(ds.dims()));
            Matrix features = doc.scaler ? doc.scaler->apply(ds.features) : ds.features;
            ms.add(std::make_shared<FixedPredictions>(forward(doc.net, features)));
            name += (name.empty() ? "" : "+") + fs::path(path).stem().string();
        }
        for (const auto& path : external_paths) {
            ms.add(std::make_shared<FixedPredictions>(
                load_external_predictions(path, ds.rows())));
            name += (name.empty() ? "" : "+") + fs::path(path).stem().string();
        }

        auto pred = ensemble_predict(ms, ds.features);
        double r2 = r2_score(pred, ds.targets);
        double mse = mse_loss(pred, ds.targets);
        double variance = std::numeric_limits<double>::quiet_NaN();
        if (ms.size() >= 2) variance = prediction_variance(ms, ds.features);

        std::cout << "members " << ms.size() << "\nmse " << mse << "\nr2 " << r2 << '\n';
        if (ms.size() >= 2) std::cout << "prediction_variance " << variance << '\n';

        ensure_dir(out_dir);
        std::ofstream metrics(out_dir + "/metrics.csv");
        write_metrics_csv(metrics, {{name, r2, variance}});
        persist_effective_config(sub, out_dir);
        return 0;
    }
};

// ---- analyze ----------------------------------------------------------------

struct AnalyzeCmd {
    std::string model_path;
    std::string out_dir;
    double epsilon = 0.0;
    CLI::App* sub = nullptr;

    void attach(CLI::App& app) {
        sub = app.add_subcommand("analyze",
                                 "feature importance and sparsity report for a model file");
        sub->add_option("--model", model_path, "model file")->required();
        sub->add_option("--epsilon", epsilon, "zero-weight threshold")->capture_default_str();
        sub->add_option("--out", out_dir, "output directory")->required();
    }

    int run() const {
        ModelDocument doc = load_model(model_path);
        ImportanceVector imp = garson_importance(doc.net);
        SparsityReport report = sparsity_report(doc.net, epsilon);

        ensure_dir(out_dir);
        {
            std::ofstream out(out_dir + "/importance.csv");
            write_importance_csv(imp, {}, out);
        }
        std::ostringstream summary;
        summary << sparsity_summary(report);
        if (imp.all_zero) {
            summary << "importance entropy: undefined (all-zero network)\n";
        } else {
            summary << "importance entropy (bits): " << importance_entropy(imp) << '\n';
        }
        write_text(out_dir + "/sparsity.txt", summary.str());
        persist_effective_config(sub, out_dir);
        std::cout << summary.str();
        return 0;
    }
};

// ---- grid-search ------------------------------------------------------------

struct GridSearchCmd {
    DataFlags data;
    GridFlags grid_flags;
    std::string mode = "rln";
    std::string norm = "l1";
    std::string update = "proximal";
    std::uint64_t seed = 0;
    double sparsity_epsilon = 0.0;
    std::size_t jobs = 1;
    std::string out_dir;
    CLI::App* sub = nullptr;

    GridSearchCmd() {
        data.train_frac = 0.6;
        data.val_frac = 0.2;
        data.test_frac = 0.2;
    }

    void attach(CLI::App& app) {
        sub = app.add_subcommand("grid-search",
                                 "search a hyperparameter grid on the validation split");
        data.attach(sub);
        grid_flags.attach(sub);
        sub->add_option("--mode", mode, "model family to search")->capture_default_str();
        sub->add_option("--norm", norm, "weight norm")->capture_default_str();
        sub->add_option("--update", update, "weight update rule")->capture_default_str();
        sub->add_option("--seed", seed, "training seed shared by all grid points")
            ->capture_default_str();
        sub->add_option("--sparsity-epsilon", sparsity_epsilon, "zero-weight threshold")
            ->capture_default_str();
        sub->add_option("--jobs", jobs, "parallel grid points")->capture_default_str();
        sub->add_option("--out", out_dir, "output directory")->required();
    }

    int run() const {
        Grid grid = grid_flags.resolve();
        Mode m = mode_from_name(mode);
        TrainConfig base;
        base.norm = norm_from_name(norm);
        base.weight_update = weight_update_from_name(update);
        if (m == Mode::Linear) {
            base.norm = Norm::L2;
            base.weight_update = WeightUpdate::Subgradient;
        }
        base.seed = seed;
        base.sparsity_epsilon = sparsity_epsilon;

        Dataset ds = load_and_split(data);
        if (data.standardize_features) ds = standardize(ds).first;

        std::cout << "grid points: " << enumerate_grid(grid, m).size() << '\n';
        GridSearchResult gs = grid_search(ds, grid, m, base, jobs);

        ensure_dir(out_dir);
        {
            std::ofstream out(out_dir + "/leaderboard.csv");
            write_leaderboard_csv(gs, out);
        }
        write_text(out_dir + "/best_config.ini", best_config_ini(gs, gs.best_config));
        persist_effective_config(sub, out_dir);
        std::cout << "best point " << gs.best_index << ": val mse "
                  << gs.leaderboard[gs.best_index].val_mse << "\nwrote " << out_dir
                  << "/leaderboard.csv and best_config.ini\n";
        return 0;
    }
};

// ---- benchmark --------------------------------------------------------------

// Optional per-mode overrides of the shared grid axes.
struct ModeGridOverride {
    std::string prefix;
    std::string etas, nus, thetas, archs, batches, epoch_grid;

    explicit ModeGridOverride(std::string p) : prefix(std::move(p)) {}

    void attach(CLI::App* sub) {
        auto name = [&](const char* axis) { return "--" + prefix + "-" + axis; };
        sub->add_option(name("etas"), etas, prefix + " eta grid override");
        sub->add_option(name("nus"), nus, prefix + " nu grid override");
        sub->add_option(name("thetas"), thetas, prefix + " theta grid override");
        sub->add_option(name("archs"), archs, prefix + " architecture grid override");
        sub->add_option(name("batches"), batches, prefix + " batch grid override");
        sub->add_option(name("epoch-grid"), epoch_grid, prefix + " epochs grid override");
    }

    Grid apply(Grid g) const {
        if (!etas.empty()) g.etas = parse_double_list(etas);
        if (!nus.empty()) g.nus = parse_double_list(nus);
        if (!thetas.empty()) g.thetas = parse_double_list(thetas);
        if (!archs.empty()) g.archs = parse_arch_list(archs);
        if (!batches.empty()) g.batch_sizes = parse_size_list(batches);
        if (!epoch_grid.empty()) g.epoch_counts = parse_size_list(epoch_grid);
        g.validate();
        return g;
    }
};

struct BenchmarkCmd {
    SynthConfig synth;
    GridFlags grid_flags;
    ModeGridOverride rln_grid{"rln"};
    ModeGridOverride dnn_grid{"dnn"};
    ModeGridOverride linear_grid{"linear"};
    std::string modes = "rln,dnn_uniform,linear";
    std::size_t n_seeds = 10;
    std::string norm = "l1";
    std::string update = "proximal";
    double sparsity_epsilon = 0.0;
    double train_frac = 0.6, val_frac = 0.2, test_frac = 0.2;
    std::size_t jobs = 1;
    std::string out_dir;
    CLI::App* sub = nullptr;

    void attach(CLI::App& app) {
        sub = app.add_subcommand(
            "benchmark", "seed-replicated model comparison on synthetic data");
        sub->add_option("--samples", synth.n_samples, "samples per dataset")
            ->capture_default_str();
        sub->add_option("--features", synth.n_features, "feature count")->capture_default_str();
        sub->add_option("--informative", synth.n_informative, "informative feature count")
            ->capture_default_str();
        sub->add_option("--decay", synth.decay, "importance decay")->capture_default_str();
        sub->add_option("--interactions", synth.interaction_pairs, "interaction pairs")
            ->capture_default_str();
        sub->add_option("--noise-r2", synth.noise_r2, "noise share of target variance")
            ->capture_default_str();
        sub->add_option("--master-seed", synth.seed, "master seed for the whole run")
            ->capture_default_str();
        grid_flags.attach(sub);
        rln_grid.attach(sub);
        dnn_grid.attach(sub);
        linear_grid.attach(sub);
        sub->add_option("--modes", modes, "comma-separated model families")
            ->capture_default_str();
        sub->add_option("--seeds", n_seeds, "replication seeds")->capture_default_str();
        sub->add_option("--norm", norm, "weight norm")->capture_default_str();
        sub->add_option("--update", update, "weight update rule")->capture_default_str();
        sub->add_option("--sparsity-epsilon", sparsity_epsilon, "zero-weight threshold")
            ->capture_default_str();
        sub->add_option("--train-frac", train_frac, "training fraction")->capture_default_str();
        sub->add_option("--val-frac", val_frac, "validation fraction")->capture_default_str();
        sub->add_option("--test-frac", test_frac, "test fraction")->capture_default_str();
        sub->add_option("--jobs", jobs, "parallel grid points")->capture_default_str();
        sub->add_option("--out", out_dir, "base output directory")->required();
    }

    int run() const {
        // validate everything before any training starts
        Grid grid = grid_flags.resolve();
        std::vector<std::pair<Mode, Grid>> grids;
        {
            std::stringstream ss(modes);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item.empty()) continue;
                Mode m = mode_from_name(item);
                Grid g = m == Mode::Rln          ? rln_grid.apply(grid)
                         : m == Mode::DnnUniform ? dnn_grid.apply(grid)
                                                 : linear_grid.apply(grid);
                grids.emplace_back(m, g);
            }
        }
        if (grids.empty()) throw ConfigError("benchmark: no modes given");
        BenchmarkOptions opts;
        opts.train_frac = train_frac;
        opts.validation_frac = val_frac;
        opts.test_frac = test_frac;
        opts.norm = norm_from_name(norm);
        opts.weight_update = weight_update_from_name(update);
        opts.sparsity_epsilon = sparsity_epsilon;
        opts.jobs = jobs;
        if (opts.weight_update == WeightUpdate::Proximal && opts.norm != Norm::L1)
            throw ConfigError("proximal updates require the l1 norm");
        {
            // probe the synth config before committing to the run
            SynthConfig probe = synth;
            probe.n_samples = 1;
            synth_generate(probe);
        }

        const std::string effective = sub->config_to_str(true, false);
        const std::string run_dir = out_dir + "/run-" + config_hash_hex(effective);
        ensure_dir(run_dir);
        write_text(run_dir + "/effective_config.ini", effective);

        std::size_t total_points = 0;
        for (const auto& [m, g] : grids) total_points += enumerate_grid(g, m).size();
        std::cout << "benchmark: " << grids.size() << " modes, " << n_seeds << " seeds, "
                  << total_points << " grid points per seed\n";

        BenchmarkResult result = run_benchmark(synth, grids, n_seeds, opts);

        {
            std::ofstream rows(run_dir + "/rows.csv");
            write_benchmark_rows_csv(result, rows);
        }
        {
            std::ofstream aggs(run_dir + "/aggregates.csv");
            write_benchmark_aggregates_csv(result, aggs);
        }
        write_text(run_dir + "/summary.txt", benchmark_summary(result));
        std::cout << benchmark_summary(result);
        std::cout << "wrote " << run_dir << "/rows.csv, aggregates.csv, summary.txt\n";
        return 0;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regularization learning networks for tabular data"};
    app.require_subcommand(1);
    app.fallthrough(true); // lets `rln <cmd> --config file` reach the top-level option

    SynthCmd synth_cmd;
    TrainCmd train_cmd;
    EvalCmd eval_cmd;
    AnalyzeCmd analyze_cmd;
    GridSearchCmd grid_cmd;
    BenchmarkCmd bench_cmd;

    synth_cmd.attach(app);
    train_cmd.attach(app);
    eval_cmd.attach(app);
    analyze_cmd.attach(app);
    grid_cmd.attach(app);
    bench_cmd.attach(app);

    app.set_config("--config", "",
                   "read options from a config file ([subcommand] section, key=value lines)");
    app.allow_config_extras(false);
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->configurable(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (synth_cmd.sub->parsed()) return synth_cmd.run();
        if (train_cmd.sub->parsed()) return train_cmd.run();
        if (eval_cmd.sub->parsed()) return eval_cmd.run();
        if (analyze_cmd.sub->parsed()) return analyze_cmd.run();
        if (grid_cmd.sub->parsed()) return grid_cmd.run();
        if (bench_cmd.sub->parsed()) return bench_cmd.run();
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SequencingError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
