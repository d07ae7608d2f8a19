#ifndef RLN_DATA_HPP
#define RLN_DATA_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "rln/matrix.hpp"

namespace rln {

enum class SplitTag { Train, Validation, Test };

std::string split_tag_name(SplitTag t);

/// Immutable-after-construction tabular dataset.
struct Dataset {
    Matrix features; // M x d
    std::vector<double> targets;
    std::vector<std::string> feature_names;
    std::vector<SplitTag> split; // one tag per sample

    std::size_t rows() const { return features.rows(); }
    std::size_t dims() const { return features.cols(); }

    std::vector<std::size_t> indices_of(SplitTag tag) const;
    std::size_t count_of(SplitTag tag) const { return indices_of(tag).size(); }

    /// Copies the rows carrying the given tag.
    std::pair<Matrix, std::vector<double>> subset(SplitTag tag) const;
};

enum class MissingPolicy { RejectRow, MeanImpute };

/// Comma-separated, header mandatory, "." decimals, UTF-8. Cells must be
/// numeric or empty; empty cells follow the missing policy. Rows with a
/// missing target are dropped under either policy.
Dataset load_csv(const std::string& path, const std::string& target_column,
                 MissingPolicy policy);

/// Writes the dataset back out in the same dialect, target as last column.
void write_csv(const Dataset& ds, std::ostream& out, const std::string& target_name);
void write_csv_file(const Dataset& ds, const std::string& path, const std::string& target_name);

/// Per-feature affine transform fitted on the training split.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> std_dev; // 1.0 for constant features

    Matrix apply(const Matrix& features) const;
};

/// Shifts/scales every feature by training-split statistics. Constant
/// training columns map to all-zeros with a recorded std of 1.
std::pair<Dataset, Scaler> standardize(const Dataset& ds);

/// Seeded uniform shuffle into train/validation/test. Fractions must be
/// nonnegative and sum to 1 within 1e-9; counts match within one sample.
Dataset split_dataset(const Dataset& ds, double train_frac, double validation_frac,
                      double test_frac, std::uint64_t seed);

/// Retags every validation sample as train (used before final refits).
Dataset merge_validation_into_train(const Dataset& ds);

/// Squared Pearson correlation of each feature with the target over the
/// training split; constant features (or a constant target) give 0.
std::vector<double> feature_r2(const Dataset& ds);

struct SynthConfig {
    std::size_t n_samples = 1000;
    std::size_t n_features = 100;
    std::size_t n_informative = 10;
    double decay = 0.5;        // geometric importance decay in (0, 1]
    std::size_t interaction_pairs = 0;
    double noise_r2 = 0.0;     // fraction of target variance contributed by noise, [0, 1)
    std::uint64_t seed = 0;
};

struct SynthMeta {
    std::vector<double> betas;                          // per informative feature
    std::vector<std::tuple<std::size_t, std::size_t, double>> interactions; // (a, b, gamma)
    SynthConfig config;
};

struct SynthData {
    Dataset dataset; // all rows tagged train; callers split as needed
    SynthMeta meta;
};

/// Features i.i.d. standard normal; target = sum of beta_j x_j over the
/// informative features (beta_j = decay^j) plus pairwise interaction terms
/// gamma_k x_a x_b (gamma_k = decay^k, consecutive informative pairs), plus
/// Gaussian noise scaled so noise variance / target variance = noise_r2.
SynthData synth_generate(const SynthConfig& cfg);

/// Sidecar document with the true coefficients and the generator config.
void write_synth_meta(const SynthMeta& meta, const std::string& path);

} // namespace rln

#endif
