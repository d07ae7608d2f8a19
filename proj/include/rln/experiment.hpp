#ifndef RLN_EXPERIMENT_HPP
#define RLN_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rln/analysis.hpp"
#include "rln/data.hpp"
#include "rln/trainer.hpp"

namespace rln {

/// Hyperparameter grid. The cross product is walked in a fixed order:
/// architecture, eta, nu, theta, batch size, epochs (innermost).
struct Grid {
    std::vector<std::vector<std::size_t>> archs = {{50, 10}}; // hidden widths
    std::vector<double> etas = {1e-3, 1e-2};
    std::vector<double> nus = {1e3, 1e4, 1e5};
    std::vector<double> thetas = {-8.0, -6.0, -4.0};
    std::vector<std::size_t> batch_sizes = {32};
    std::vector<std::size_t> epoch_counts = {100};

    std::size_t total_combinations() const;
    void validate() const;
};

struct GridPoint {
    std::vector<std::size_t> arch;
    double eta = 0.0;
    double nu = 0.0;
    double theta = 0.0;
    std::size_t batch_size = 0;
    std::size_t epochs = 0;
};

/// Grid normalized for a mode: non-rln modes collapse the nu axis to {0},
/// linear collapses the architecture axis.
std::vector<GridPoint> enumerate_grid(const Grid& grid, Mode mode);

struct LeaderboardEntry {
    GridPoint point;
    double val_mse = 0.0; // +inf marks a numerically diverged point
};

struct GridSearchResult {
    TrainConfig best_config;
    std::vector<std::size_t> best_arch;
    std::size_t best_index = 0;
    std::vector<LeaderboardEntry> leaderboard; // grid order
};

/// Trains every grid point with the base config's seed and scores
/// validation MSE; ties break toward the earliest grid point. Diverged
/// points score +inf instead of aborting the search.
GridSearchResult grid_search(const Dataset& ds, const Grid& grid, Mode mode,
                             const TrainConfig& base, std::size_t jobs = 1);

void write_leaderboard_csv(const GridSearchResult& result, std::ostream& out);

enum class BenchMetric {
    TestR2,
    FirstLayerZeroFraction,
    NetworkZeroFraction,
    EliminatedFeatureFraction,
    ImportanceEntropy,
};
constexpr std::size_t kBenchMetricCount = 5;
std::string bench_metric_name(BenchMetric m);

struct BenchmarkRow {
    Mode mode = Mode::Rln;
    std::size_t seed_index = 0;
    std::uint64_t data_seed = 0;
    GridPoint best_point; // validation winner refit on train+validation
    std::uint64_t train_seed = 0;
    double test_r2 = 0.0;
    double first_layer_zero_fraction = 0.0;
    double network_zero_fraction = 0.0;
    double eliminated_feature_fraction = 0.0;
    double importance_entropy = 0.0; // NaN when the trained net is all-zero

    double metric(BenchMetric m) const;
};

struct BenchmarkAggregate {
    Mode mode = Mode::Rln;
    std::size_t n = 0;
    std::array<double, kBenchMetricCount> mean{};
    std::array<double, kBenchMetricCount> std_dev{}; // population
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
    std::vector<BenchmarkAggregate> aggregates;
};

std::vector<BenchmarkAggregate> aggregate_rows(const std::vector<BenchmarkRow>& rows);

struct BenchmarkOptions {
    double train_frac = 0.6;
    double validation_frac = 0.2;
    double test_frac = 0.2;
    Norm norm = Norm::L1;
    WeightUpdate weight_update = WeightUpdate::Proximal;
    double sparsity_epsilon = 0.0;
    std::size_t jobs = 1;
};

/// Per seed: regenerate the synthetic data, grid-search each mode on the
/// train/validation splits, refit the winner on train+validation, and
/// evaluate on the test split. The synth config's seed acts as the master
/// seed; everything downstream derives from it.
BenchmarkResult run_benchmark(const SynthConfig& synth,
                              const std::vector<std::pair<Mode, Grid>>& grids,
                              std::size_t n_seeds, const BenchmarkOptions& opts = {});

struct TrendResult {
    std::size_t wins = 0; // seeds where mode a strictly beats mode b
    std::size_t n = 0;
    double mean_diff = 0.0;
};

/// Seed-keyed paired comparison of one metric between two modes.
TrendResult trend_test(const BenchmarkResult& result, BenchMetric metric, Mode a, Mode b);

void write_benchmark_rows_csv(const BenchmarkResult& result, std::ostream& out);
void write_benchmark_aggregates_csv(const BenchmarkResult& result, std::ostream& out);
std::string benchmark_summary(const BenchmarkResult& result);

/// Trains n instantiations of one configuration (training seed varied,
/// data fixed) and returns their Garson importances. Supports consistency
/// comparisons across model instantiations.
std::vector<ImportanceVector> importance_instantiations(const Dataset& ds,
                                                        const std::vector<std::size_t>& hidden,
                                                        const TrainConfig& cfg, Mode mode,
                                                        std::size_t n, std::size_t jobs = 1);

/// Mean pairwise Jensen-Shannon divergence; all-zero members are skipped.
double mean_pairwise_jsd(const std::vector<ImportanceVector>& importances);

/// FNV-1a hash of a canonical config string; names per-run output folders.
std::uint64_t config_hash(const std::string& canonical);
std::string config_hash_hex(const std::string& canonical);

} // namespace rln

#endif
