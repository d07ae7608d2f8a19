#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rln/data.hpp"
#include "rln/rng.hpp"
#include "oracles.hpp"

using namespace rln;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("rln_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv"))
                   .string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("load_csv reads a simple file") {
    TempFile f("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
    Dataset ds = load_csv(f.path, "y", MissingPolicy::RejectRow);
    CHECK(ds.rows() == 3);
    CHECK(ds.dims() == 2);
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.features(1, 0) == 4.0);
    CHECK(ds.targets[2] == 9.0);
    for (auto tag : ds.split) CHECK(tag == SplitTag::Train);
}

TEST_CASE("load_csv missing-value policies") {
    TempFile f("a,b,y\n1,2,3\n,5,6\n3,8,9\n");
    Dataset rejected = load_csv(f.path, "y", MissingPolicy::RejectRow);
    CHECK(rejected.rows() == 2);

    Dataset imputed = load_csv(f.path, "y", MissingPolicy::MeanImpute);
    CHECK(imputed.rows() == 3);
    CHECK(imputed.features(1, 0) == doctest::Approx(2.0)); // mean of 1 and 3
}

TEST_CASE("load_csv error cases") {
    TempFile empty("");
    CHECK_THROWS_AS(load_csv(empty.path, "y", MissingPolicy::RejectRow), DataError);

    TempFile no_target("a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(no_target.path, "y", MissingPolicy::RejectRow), DataError);

    TempFile junk("a,y\nfoo,2\n");
    CHECK_THROWS_AS(load_csv(junk.path, "y", MissingPolicy::RejectRow), DataError);

    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y", MissingPolicy::RejectRow), DataError);
}

TEST_CASE("csv round trip preserves values") {
    SynthConfig cfg;
    cfg.n_samples = 20;
    cfg.n_features = 3;
    cfg.n_informative = 2;
    cfg.seed = 5;
    Dataset ds = synth_generate(cfg).dataset;
    std::ostringstream buf;
    write_csv(ds, buf, "target");
    TempFile f(buf.str());
    Dataset back = load_csv(f.path, "target", MissingPolicy::RejectRow);
    REQUIRE(back.rows() == ds.rows());
    CHECK(back.features == ds.features);
    CHECK(back.targets == ds.targets);
}

TEST_CASE("standardize uses training statistics") {
    Dataset ds;
    ds.features = Matrix::from_rows({{0.0}, {2.0}, {9.0}});
    ds.targets = {0, 0, 0};
    ds.feature_names = {"a"};
    ds.split = {SplitTag::Train, SplitTag::Train, SplitTag::Test};
    auto [out, scaler] = standardize(ds);
    CHECK(scaler.mean[0] == doctest::Approx(1.0));
    CHECK(scaler.std_dev[0] == doctest::Approx(1.0)); // population std of {0, 2}
    CHECK(out.features(0, 0) == doctest::Approx(-1.0));
    CHECK(out.features(1, 0) == doctest::Approx(1.0));
    CHECK(out.features(2, 0) == doctest::Approx(8.0)); // test row, train stats

    // train mean 5, std 2, test value 9 -> 2
    Dataset ds2;
    ds2.features = Matrix::from_rows({{3.0}, {7.0}, {9.0}});
    ds2.targets = {0, 0, 0};
    ds2.feature_names = {"a"};
    ds2.split = {SplitTag::Train, SplitTag::Train, SplitTag::Test};
    auto [out2, scaler2] = standardize(ds2);
    CHECK(scaler2.mean[0] == doctest::Approx(5.0));
    CHECK(scaler2.std_dev[0] == doctest::Approx(2.0));
    CHECK(out2.features(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("standardize maps constant columns to zeros") {
    Dataset ds;
    ds.features = Matrix::from_rows({{4.0, 1.0}, {4.0, 3.0}});
    ds.targets = {0, 0};
    ds.feature_names = {"c", "v"};
    ds.split = {SplitTag::Train, SplitTag::Train};
    auto [out, scaler] = standardize(ds);
    CHECK(out.features(0, 0) == 0.0);
    CHECK(out.features(1, 0) == 0.0);
    CHECK(scaler.std_dev[0] == 1.0);
}

TEST_CASE("standardized training columns have zero mean and unit std") {
    SynthConfig cfg;
    cfg.n_samples = 200;
    cfg.n_features = 4;
    cfg.n_informative = 2;
    cfg.seed = 11;
    Dataset ds = split_dataset(synth_generate(cfg).dataset, 0.7, 0.15, 0.15, 3);
    // shift/scale features so the standardization has work to do
    for (std::size_t i = 0; i < ds.rows(); ++i)
        for (std::size_t j = 0; j < ds.dims(); ++j)
            ds.features(i, j) = 3.0 * ds.features(i, j) + 7.0;
    auto [out, scaler] = standardize(ds);
    auto idx = out.indices_of(SplitTag::Train);
    for (std::size_t j = 0; j < out.dims(); ++j) {
        double mean = 0.0;
        for (auto i : idx) mean += out.features(i, j);
        mean /= static_cast<double>(idx.size());
        double var = 0.0;
        for (auto i : idx) var += (out.features(i, j) - mean) * (out.features(i, j) - mean);
        var /= static_cast<double>(idx.size());
        CHECK(std::fabs(mean) < 1e-10);
        CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-10);
    }
}

TEST_CASE("split respects fractions and is deterministic") {
    SynthConfig cfg;
    cfg.n_samples = 10;
    cfg.n_features = 2;
    cfg.n_informative = 1;
    cfg.seed = 2;
    Dataset base = synth_generate(cfg).dataset;

    Dataset all_train = split_dataset(base, 1.0, 0.0, 0.0, 1);
    CHECK(all_train.count_of(SplitTag::Train) == 10);

    Dataset split = split_dataset(base, 0.8, 0.1, 0.1, 1);
    CHECK(split.count_of(SplitTag::Train) == 8);
    CHECK(split.count_of(SplitTag::Validation) == 1);
    CHECK(split.count_of(SplitTag::Test) == 1);

    Dataset again = split_dataset(base, 0.8, 0.1, 0.1, 1);
    CHECK(split.split == again.split);

    CHECK_THROWS_AS(split_dataset(base, 0.8, 0.1, 0.2, 1), ConfigError);
}

TEST_CASE("split is a partition") {
    SynthConfig cfg;
    cfg.n_samples = 57;
    cfg.n_features = 2;
    cfg.n_informative = 1;
    cfg.seed = 8;
    Dataset base = synth_generate(cfg).dataset;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Dataset s = split_dataset(base, 0.62, 0.21, 0.17, seed);
        CHECK(s.count_of(SplitTag::Train) + s.count_of(SplitTag::Validation) +
                  s.count_of(SplitTag::Test) ==
              57);
    }
}

TEST_CASE("feature_r2 basics") {
    Dataset ds;
    ds.features = Matrix::from_rows({{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}, {4.0, 5.0}});
    ds.targets = {-3.0, -6.0, -9.0, -12.0}; // -3 * feature 0
    ds.feature_names = {"x", "const"};
    ds.split.assign(4, SplitTag::Train);
    auto r2 = feature_r2(ds);
    CHECK(r2[0] == doctest::Approx(1.0)); // sign-invariant
    CHECK(r2[1] == 0.0);                  // constant feature

    ds.targets = {1.0, 2.0, 3.0, 4.0}; // exact copy
    CHECK(feature_r2(ds)[0] == doctest::Approx(1.0));
}

TEST_CASE("feature_r2 of an independent feature is near zero") {
    SynthConfig cfg;
    cfg.n_samples = 1000;
    cfg.n_features = 3;
    cfg.n_informative = 1;
    cfg.noise_r2 = 0.0;
    cfg.seed = 77;
    Dataset ds = synth_generate(cfg).dataset;
    auto r2 = feature_r2(ds);
    CHECK(r2[0] > 0.9);   // the informative one
    CHECK(r2[1] < 0.05);  // nuisance
    CHECK(r2[2] < 0.05);
    // against the direct Pearson computation
    std::vector<double> col(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) col[i] = ds.features(i, 1);
    CHECK(r2[1] == doctest::Approx(oracles::pearson_r2(col, ds.targets)).epsilon(1e-12));
}

TEST_CASE("synth: least squares recovers the informative coefficients") {
    SynthConfig cfg;
    cfg.n_samples = 5000;
    cfg.n_features = 8;
    cfg.n_informative = 4;
    cfg.decay = 0.5;
    cfg.noise_r2 = 0.0;
    cfg.seed = 31;
    SynthData sd = synth_generate(cfg);
    Matrix informative(sd.dataset.rows(), 4);
    for (std::size_t i = 0; i < sd.dataset.rows(); ++i)
        for (std::size_t j = 0; j < 4; ++j) informative(i, j) = sd.dataset.features(i, j);
    auto fit = oracles::least_squares(informative, sd.dataset.targets);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(sd.meta.betas[j] == doctest::Approx(std::pow(0.5, double(j))));
        CHECK(std::fabs(fit.weights[j] - sd.meta.betas[j]) < 1e-2);
    }
}

TEST_CASE("synth: decay 1 gives equal univariate r2") {
    SynthConfig cfg;
    cfg.n_samples = 5000;
    cfg.n_features = 4;
    cfg.n_informative = 3;
    cfg.decay = 1.0;
    cfg.seed = 13;
    Dataset ds = synth_generate(cfg).dataset;
    auto r2 = feature_r2(ds);
    CHECK(std::fabs(r2[0] - r2[1]) < 0.02);
    CHECK(std::fabs(r2[1] - r2[2]) < 0.02);
}

TEST_CASE("synth: no informative features means pure noise") {
    SynthConfig cfg;
    cfg.n_samples = 1000;
    cfg.n_features = 5;
    cfg.n_informative = 0;
    cfg.noise_r2 = 0.0; // degenerate: signal is identically zero, so force noise
    cfg.seed = 4;
    Dataset ds = synth_generate(cfg).dataset;
    // target must still vary; an all-zero signal with zero noise would be constant
    bool constant = true;
    for (double y : ds.targets)
        if (y != ds.targets[0]) constant = false;
    if (constant) {
        cfg.noise_r2 = 0.5;
        ds = synth_generate(cfg).dataset;
    }
    auto r2 = feature_r2(ds);
    for (double v : r2) CHECK(v < 0.05);
}

TEST_CASE("synth: decay < 1 orders expected importance") {
    int monotone = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SynthConfig cfg;
        cfg.n_samples = 5000;
        cfg.n_features = 6;
        cfg.n_informative = 4;
        cfg.decay = 0.5;
        cfg.noise_r2 = 0.1;
        cfg.seed = seed;
        auto r2 = feature_r2(synth_generate(cfg).dataset);
        bool ok = true;
        for (std::size_t j = 1; j < 4; ++j)
            if (r2[j] >= r2[j - 1]) ok = false;
        if (ok) ++monotone;
    }
    CHECK(monotone >= 9);
}

TEST_CASE("synth: noise_r2 controls the noise share") {
    SynthConfig cfg;
    cfg.n_samples = 20000;
    cfg.n_features = 3;
    cfg.n_informative = 2;
    cfg.decay = 1.0;
    cfg.noise_r2 = 0.3;
    cfg.seed = 6;
    SynthData sd = synth_generate(cfg);
    // signal variance is ~2 (two unit-variance features with beta 1)
    double mean = 0.0;
    for (double y : sd.dataset.targets) mean += y;
    mean /= static_cast<double>(sd.dataset.targets.size());
    double var = 0.0;
    for (double y : sd.dataset.targets) var += (y - mean) * (y - mean);
    var /= static_cast<double>(sd.dataset.targets.size());
    CHECK(var == doctest::Approx(2.0 / 0.7).epsilon(0.1));
}

TEST_CASE("synth is deterministic and writes metadata") {
    SynthConfig cfg;
    cfg.n_samples = 30;
    cfg.n_features = 4;
    cfg.n_informative = 2;
    cfg.interaction_pairs = 1;
    cfg.seed = 19;
    SynthData a = synth_generate(cfg);
    SynthData b = synth_generate(cfg);
    CHECK(a.dataset.features == b.dataset.features);
    CHECK(a.dataset.targets == b.dataset.targets);
    CHECK(a.meta.interactions.size() == 1);

    auto tmp = (std::filesystem::temp_directory_path() / "rln_meta_test.json").string();
    write_synth_meta(a.meta, tmp);
    std::ifstream in(tmp);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("betas") != std::string::npos);
    std::remove(tmp.c_str());
}

TEST_CASE("synth validates its config") {
    SynthConfig cfg;
    cfg.n_features = 3;
    cfg.n_informative = 5;
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
    cfg.n_informative = 2;
    cfg.decay = 0.0;
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
    cfg.decay = 0.5;
    cfg.noise_r2 = 1.0;
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
}
