#include "rln/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rln/ensemble.hpp"
#include "rln/errors.hpp"

namespace rln {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string arch_to_string(const std::vector<std::size_t>& hidden) {
    if (hidden.empty()) return "linear";
    std::string s;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(hidden[i]);
    }
    return s;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions from
/// workers are captured and the first one rethrown after joining.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

std::size_t Grid::total_combinations() const {
    return archs.size() * etas.size() * nus.size() * thetas.size() * batch_sizes.size() *
           epoch_counts.size();
}

void Grid::validate() const {
    if (archs.empty() || etas.empty() || nus.empty() || thetas.empty() ||
        batch_sizes.empty() || epoch_counts.empty())
        throw ConfigError("grid: every axis needs at least one value");
    for (double e : etas)
        if (!(e > 0.0)) throw ConfigError("grid: eta values must be positive");
    for (double n : nus)
        if (!(n >= 0.0)) throw ConfigError("grid: nu values must be nonnegative");
    for (double t : thetas)
        if (!std::isfinite(t)) throw ConfigError("grid: theta values must be finite");
    for (std::size_t b : batch_sizes)
        if (b < 1) throw ConfigError("grid: batch sizes must be >= 1");
    for (const auto& a : archs)
        for (std::size_t h : a)
            if (h < 1) throw ConfigError("grid: hidden widths must be >= 1");
}

std::vector<GridPoint> enumerate_grid(const Grid& grid, Mode mode) {
    grid.validate();
    std::vector<std::vector<std::size_t>> archs =
        mode == Mode::Linear ? std::vector<std::vector<std::size_t>>{{}} : grid.archs;
    std::vector<double> nus = mode == Mode::Rln ? grid.nus : std::vector<double>{0.0};

    std::vector<GridPoint> points;
    points.reserve(archs.size() * grid.etas.size() * nus.size() * grid.thetas.size() *
                   grid.batch_sizes.size() * grid.epoch_counts.size());
    for (const auto& arch : archs)
        for (double eta : grid.etas)
            for (double nu : nus)
                for (double theta : grid.thetas)
                    for (std::size_t batch : grid.batch_sizes)
                        for (std::size_t epochs : grid.epoch_counts)
                            points.push_back({arch, eta, nu, theta, batch, epochs});
    return points;
}

namespace {

TrainConfig config_for_point(const TrainConfig& base, const GridPoint& p, Mode mode) {
    TrainConfig cfg = base;
    cfg.mode = mode;
    cfg.eta = p.eta;
    cfg.nu = p.nu;
    cfg.theta = p.theta;
    cfg.batch_size = p.batch_size;
    cfg.epochs = p.epochs;
    return cfg;
}

TrainResult train_point(const Dataset& ds, const GridPoint& p, Mode mode,
                        const TrainConfig& base) {
    TrainConfig cfg = config_for_point(base, p, mode);
    if (mode == Mode::Linear) return train_linear(ds, cfg);
    return train(ds, make_mlp_arch(ds.dims(), p.arch), cfg);
}

} // namespace

GridSearchResult grid_search(const Dataset& ds, const Grid& grid, Mode mode,
                             const TrainConfig& base, std::size_t jobs) {
    if (ds.count_of(SplitTag::Train) == 0) throw DataError("grid_search: empty training split");
    if (ds.count_of(SplitTag::Validation) == 0)
        throw DataError("grid_search: empty validation split");

    auto points = enumerate_grid(grid, mode);
    auto [val_x, val_y] = ds.subset(SplitTag::Validation);

    GridSearchResult result;
    result.leaderboard.resize(points.size());
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        double score = std::numeric_limits<double>::infinity();
        try {
            TrainResult tr = train_point(ds, points[i], mode, base);
            auto pred = forward(tr.net, val_x);
            score = mse_loss(pred, val_y);
            if (!std::isfinite(score)) score = std::numeric_limits<double>::infinity();
        } catch (const NumericError&) {
            // diverged point; keep +inf and move on
        }
        result.leaderboard[i] = {points[i], score};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.leaderboard.size(); ++i)
        if (result.leaderboard[i].val_mse < result.leaderboard[best].val_mse) best = i;
    result.best_index = best;
    result.best_arch = points[best].arch;
    result.best_config = config_for_point(base, points[best], mode);
    return result;
}

void write_leaderboard_csv(const GridSearchResult& result, std::ostream& out) {
    out << "index,arch,eta,nu,theta,batch_size,epochs,val_mse,best\n";
    for (std::size_t i = 0; i < result.leaderboard.size(); ++i) {
        const auto& e = result.leaderboard[i];
        out << i << ',' << arch_to_string(e.point.arch) << ',' << fmt(e.point.eta) << ','
            << fmt(e.point.nu) << ',' << fmt(e.point.theta) << ',' << e.point.batch_size << ','
            << e.point.epochs << ',' << fmt(e.val_mse) << ','
            << (i == result.best_index ? 1 : 0) << '\n';
    }
}

std::string bench_metric_name(BenchMetric m) {
    switch (m) {
        case BenchMetric::TestR2: return "test_r2";
        case BenchMetric::FirstLayerZeroFraction: return "first_layer_zero_fraction";
        case BenchMetric::NetworkZeroFraction: return "network_zero_fraction";
        case BenchMetric::EliminatedFeatureFraction: return "eliminated_feature_fraction";
        case BenchMetric::ImportanceEntropy: return "importance_entropy";
    }
    throw ConfigError("unknown benchmark metric");
}

double BenchmarkRow::metric(BenchMetric m) const {
    switch (m) {
        case BenchMetric::TestR2: return test_r2;
        case BenchMetric::FirstLayerZeroFraction: return first_layer_zero_fraction;
        case BenchMetric::NetworkZeroFraction: return network_zero_fraction;
        case BenchMetric::EliminatedFeatureFraction: return eliminated_feature_fraction;
        case BenchMetric::ImportanceEntropy: return importance_entropy;
    }
    throw ConfigError("unknown benchmark metric");
}

std::vector<BenchmarkAggregate> aggregate_rows(const std::vector<BenchmarkRow>& rows) {
    std::vector<BenchmarkAggregate> aggs;
    for (const auto& row : rows) {
        BenchmarkAggregate* agg = nullptr;
        for (auto& a : aggs)
            if (a.mode == row.mode) agg = &a;
        if (!agg) {
            aggs.push_back({row.mode, 0, {}, {}});
            agg = &aggs.back();
        }
        ++agg->n;
        for (std::size_t m = 0; m < kBenchMetricCount; ++m)
            agg->mean[m] += row.metric(static_cast<BenchMetric>(m));
    }
    for (auto& a : aggs)
        for (auto& v : a.mean) v /= static_cast<double>(a.n);
    for (const auto& row : rows)
        for (auto& a : aggs)
            if (a.mode == row.mode)
                for (std::size_t m = 0; m < kBenchMetricCount; ++m) {
                    double d = row.metric(static_cast<BenchMetric>(m)) - a.mean[m];
                    a.std_dev[m] += d * d;
                }
    for (auto& a : aggs)
        for (auto& v : a.std_dev) v = std::sqrt(v / static_cast<double>(a.n));
    return aggs;
}

BenchmarkResult run_benchmark(const SynthConfig& synth,
                              const std::vector<std::pair<Mode, Grid>>& grids,
                              std::size_t n_seeds, const BenchmarkOptions& opts) {
    if (n_seeds < 1) throw ConfigError("run_benchmark: n_seeds must be >= 1");
    if (grids.empty()) throw ConfigError("run_benchmark: no modes given");
    for (const auto& [mode, grid] : grids) {
        (void)mode;
        grid.validate();
    }

    BenchmarkResult result;
    for (std::size_t k = 0; k < n_seeds; ++k) {
        const std::uint64_t data_seed = derive_seed(synth.seed, 1000 + k);
        SynthConfig synth_k = synth;
        synth_k.seed = data_seed;
        SynthData sd = synth_generate(synth_k);
        Dataset ds = split_dataset(sd.dataset, opts.train_frac, opts.validation_frac,
                                   opts.test_frac, derive_seed(data_seed, 1));
        ds = standardize(ds).first;
        auto [test_x, test_y] = ds.subset(SplitTag::Test);

        for (std::size_t gi = 0; gi < grids.size(); ++gi) {
            const auto& [mode, grid] = grids[gi];
            TrainConfig base;
            base.norm = opts.norm;
            base.weight_update = opts.weight_update;
            base.sparsity_epsilon = opts.sparsity_epsilon;
            base.seed = derive_seed(data_seed, 2 + gi);

            GridSearchResult gs = grid_search(ds, grid, mode, base, opts.jobs);
            Dataset refit_ds = merge_validation_into_train(ds);
            TrainResult final_model =
                mode == Mode::Linear
                    ? train_linear(refit_ds, gs.best_config)
                    : train(refit_ds, make_mlp_arch(ds.dims(), gs.best_arch), gs.best_config);

            BenchmarkRow row;
            row.mode = mode;
            row.seed_index = k;
            row.data_seed = data_seed;
            row.best_point = gs.leaderboard[gs.best_index].point;
            row.train_seed = base.seed;
            row.test_r2 = r2_score(forward(final_model.net, test_x), test_y);
            SparsityReport sp = sparsity_report(final_model.net, opts.sparsity_epsilon);
            row.first_layer_zero_fraction = sp.layer_zero_fraction.front();
            row.network_zero_fraction = sp.network_zero_fraction;
            row.eliminated_feature_fraction = sp.eliminated_feature_fraction;
            ImportanceVector imp = garson_importance(final_model.net);
            row.importance_entropy =
                imp.all_zero ? std::numeric_limits<double>::quiet_NaN() : importance_entropy(imp);
            result.rows.push_back(row);
        }
    }
    result.aggregates = aggregate_rows(result.rows);
    return result;
}

TrendResult trend_test(const BenchmarkResult& result, BenchMetric metric, Mode a, Mode b) {
    TrendResult trend;
    double diff_sum = 0.0;
    for (const auto& row : result.rows) {
        if (row.mode != a) continue;
        const BenchmarkRow* other = nullptr;
        for (const auto& candidate : result.rows)
            if (candidate.mode == b && candidate.seed_index == row.seed_index) other = &candidate;
        if (!other) throw ConfigError("trend_test: unmatched seed " + std::to_string(row.seed_index));
        double va = row.metric(metric), vb = other->metric(metric);
        if (va > vb) ++trend.wins;
        diff_sum += va - vb;
        ++trend.n;
    }
    if (trend.n == 0) throw ConfigError("trend_test: no rows for requested mode");
    trend.mean_diff = diff_sum / static_cast<double>(trend.n);
    return trend;
}

void write_benchmark_rows_csv(const BenchmarkResult& result, std::ostream& out) {
    out << "mode,seed_index,data_seed,test_r2,first_layer_zero_fraction,"
           "network_zero_fraction,eliminated_feature_fraction,importance_entropy,"
           "best_arch,best_eta,best_nu,best_theta,best_batch,best_epochs\n";
    for (const auto& r : result.rows) {
        out << mode_name(r.mode) << ',' << r.seed_index << ',' << r.data_seed << ','
            << fmt(r.test_r2) << ',' << fmt(r.first_layer_zero_fraction) << ','
            << fmt(r.network_zero_fraction) << ',' << fmt(r.eliminated_feature_fraction) << ','
            << fmt(r.importance_entropy) << ',' << arch_to_string(r.best_point.arch) << ','
            << fmt(r.best_point.eta) << ',' << fmt(r.best_point.nu) << ','
            << fmt(r.best_point.theta) << ',' << r.best_point.batch_size << ','
            << r.best_point.epochs << '\n';
    }
}

void write_benchmark_aggregates_csv(const BenchmarkResult& result, std::ostream& out) {
    out << "mode,n";
    for (std::size_t m = 0; m < kBenchMetricCount; ++m) {
        out << ',' << bench_metric_name(static_cast<BenchMetric>(m)) << "_mean";
        out << ',' << bench_metric_name(static_cast<BenchMetric>(m)) << "_std";
    }
    out << '\n';
    for (const auto& a : result.aggregates) {
        out << mode_name(a.mode) << ',' << a.n;
        for (std::size_t m = 0; m < kBenchMetricCount; ++m)
            out << ',' << fmt(a.mean[m]) << ',' << fmt(a.std_dev[m]);
        out << '\n';
    }
}

std::string benchmark_summary(const BenchmarkResult& result) {
    std::ostringstream out;
    out << "benchmark: " << result.rows.size() << " rows\n";
    for (const auto& a : result.aggregates) {
        out << mode_name(a.mode) << " (n=" << a.n << "):\n";
        for (std::size_t m = 0; m < kBenchMetricCount; ++m)
            out << "  " << bench_metric_name(static_cast<BenchMetric>(m)) << ": " << a.mean[m]
                << " +- " << a.std_dev[m] << '\n';
    }
    // paired comparisons for every ordered mode pair present
    for (const auto& a : result.aggregates) {
        for (const auto& b : result.aggregates) {
            if (a.mode == b.mode) continue;
            for (std::size_t m = 0; m < kBenchMetricCount; ++m) {
                auto metric = static_cast<BenchMetric>(m);
                TrendResult t = trend_test(result, metric, a.mode, b.mode);
                out << mode_name(a.mode) << " vs " << mode_name(b.mode) << " on "
                    << bench_metric_name(metric) << ": wins " << t.wins << "/" << t.n
                    << ", mean diff " << t.mean_diff << '\n';
            }
        }
    }
    return out.str();
}

std::vector<ImportanceVector> importance_instantiations(const Dataset& ds,
                                                        const std::vector<std::size_t>& hidden,
                                                        const TrainConfig& cfg, Mode mode,
                                                        std::size_t n, std::size_t jobs) {
    std::vector<ImportanceVector> out(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        TrainConfig c = cfg;
        c.mode = mode;
        c.seed = derive_seed(cfg.seed, 7000 + i);
        TrainResult tr = mode == Mode::Linear ? train_linear(ds, c)
                                              : train(ds, make_mlp_arch(ds.dims(), hidden), c);
        out[i] = garson_importance(tr.net);
    });
    return out;
}

double mean_pairwise_jsd(const std::vector<ImportanceVector>& importances) {
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < importances.size(); ++i) {
        if (importances[i].all_zero) continue;
        for (std::size_t j = i + 1; j < importances.size(); ++j) {
            if (importances[j].all_zero) continue;
            total += js_divergence(importances[i], importances[j]);
            ++pairs;
        }
    }
    if (pairs == 0) throw ConfigError("mean_pairwise_jsd: fewer than two usable vectors");
    return total / static_cast<double>(pairs);
}

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const std::string& canonical) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(canonical)));
    return buf;
}

} // namespace rln
