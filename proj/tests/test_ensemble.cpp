#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rln/ensemble.hpp"
#include "rln/rng.hpp"
#include "oracles.hpp"

using namespace rln;

namespace {

std::shared_ptr<const Predictor> constant_model(double value, std::size_t width) {
    Network net;
    net.layers.push_back({Matrix(1, width), {value}, Activation::Identity, 0.01});
    return std::make_shared<NetworkPredictor>(std::move(net));
}

std::shared_ptr<const Predictor> random_model(std::size_t width, std::uint64_t seed) {
    std::vector<LayerSpec> specs{{width, 4, Activation::Relu, 0.01},
                                 {4, 1, Activation::Identity, 0.01}};
    return std::make_shared<NetworkPredictor>(init_network(specs, seed));
}

Matrix random_inputs(std::size_t m, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(m, d);
    for (double& v : x.data()) v = rng.normal();
    return x;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("rln_ens_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".txt"))
                   .string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("ensemble_predict averages member predictions") {
    Matrix x = random_inputs(3, 2, 1);

    ModelSet single;
    single.add(constant_model(1.0, 2));
    auto one = ensemble_predict(single, x);
    CHECK(one == std::vector<double>{1.0, 1.0, 1.0});

    ModelSet two = single;
    two.add(constant_model(3.0, 2));
    auto mean = ensemble_predict(two, x);
    CHECK(mean == std::vector<double>{2.0, 2.0, 2.0});

    ModelSet same;
    for (int k = 0; k < 4; ++k) same.add(constant_model(1.0, 2));
    CHECK(ensemble_predict(same, x) == one);
}

TEST_CASE("ensemble_predict is permutation invariant") {
    Matrix x = random_inputs(5, 3, 2);
    ModelSet a;
    for (std::uint64_t s = 0; s < 4; ++s) a.add(random_model(3, s));
    ModelSet b;
    b.add(a.members[2]);
    b.add(a.members[0]);
    b.add(a.members[3]);
    b.add(a.members[1]);
    auto pa = ensemble_predict(a, x);
    auto pb = ensemble_predict(b, x);
    for (std::size_t i = 0; i < pa.size(); ++i)
        CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-15));
}

TEST_CASE("ensemble mean never does worse than the mean member mse") {
    Rng rng(50);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t k = 2 + static_cast<std::size_t>(rng.index(4));
        Matrix x = random_inputs(10, 3, 100 + trial);
        std::vector<double> y(10);
        for (double& v : y) v = rng.normal();

        ModelSet ms;
        for (std::size_t j = 0; j < k; ++j) ms.add(random_model(3, 200 + trial * 10 + j));

        double mean_member_mse = 0.0;
        for (const auto& member : ms.members)
            mean_member_mse += mse_loss(member->predict(x), y);
        mean_member_mse /= static_cast<double>(k);

        double ensemble_mse = mse_loss(ensemble_predict(ms, x), y);
        CHECK(ensemble_mse <= mean_member_mse + 1e-12);
    }
}

TEST_CASE("r2_score reference values") {
    std::vector<double> y{0.0, 1.0, 4.0};
    CHECK(r2_score(y, y) == doctest::Approx(1.0));

    std::vector<double> mean_pred(3, 5.0 / 3.0);
    CHECK(r2_score(mean_pred, y) == doctest::Approx(0.0));

    std::vector<double> pred{0.0, 1.0, 2.0};
    CHECK(r2_score(pred, y) == doctest::Approx(1.0 - 4.0 / (26.0 / 3.0)).epsilon(1e-12));

    std::vector<double> constant{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(r2_score(pred, constant), NumericError);
    CHECK_THROWS_AS(r2_score(std::vector<double>{1.0}, std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("prediction_variance reference values") {
    Matrix x = random_inputs(4, 2, 3);

    ModelSet identical;
    identical.add(constant_model(1.5, 2));
    identical.add(constant_model(1.5, 2));
    CHECK(prediction_variance(identical, x) == doctest::Approx(0.0));

    ModelSet pair;
    pair.add(constant_model(0.0, 2));
    pair.add(constant_model(2.0, 2));
    CHECK(prediction_variance(pair, x) == doctest::Approx(1.0));

    ModelSet triple;
    triple.add(constant_model(1.0, 2));
    triple.add(constant_model(2.0, 2));
    triple.add(constant_model(3.0, 2));
    CHECK(prediction_variance(triple, x) == doctest::Approx(2.0 / 3.0));

    ModelSet lone;
    lone.add(constant_model(0.0, 2));
    CHECK_THROWS_AS(prediction_variance(lone, x), ConfigError);
}

TEST_CASE("prediction_variance is nonnegative, zero iff members agree") {
    Matrix x = random_inputs(6, 3, 9);
    ModelSet ms;
    for (std::uint64_t s = 0; s < 3; ++s) ms.add(random_model(3, 40 + s));
    CHECK(prediction_variance(ms, x) > 0.0);
}

TEST_CASE("load_external_predictions") {
    TempFile zeros("0\n0\n0\n");
    auto v = load_external_predictions(zeros.path, 3);
    CHECK(v == std::vector<double>{0.0, 0.0, 0.0});

    CHECK_THROWS_AS(load_external_predictions(zeros.path, 4), DataError);

    TempFile junk("1.0\nnope\n");
    CHECK_THROWS_AS(load_external_predictions(junk.path, 2), DataError);

    // a member equal to the targets gives a perfect ensemble of one
    std::vector<double> y{1.5, -0.5, 2.0, 0.25};
    std::ostringstream body;
    for (double t : y) body << t << '\n';
    TempFile perfect(body.str());
    ModelSet ms;
    ms.add(std::make_shared<FixedPredictions>(load_external_predictions(perfect.path, 4)));
    Matrix x(4, 2);
    CHECK(r2_score(ensemble_predict(ms, x), y) == doctest::Approx(1.0));

    // row-count mismatch at prediction time
    Matrix x3(3, 2);
    CHECK_THROWS_AS(ensemble_predict(ms, x3), ConfigError);
}

TEST_CASE("select_top_k ranks members by validation r2") {
    Matrix x = random_inputs(20, 2, 5);
    std::vector<double> y(20);
    for (std::size_t i = 0; i < 20; ++i) y[i] = x(i, 0) * 2.0;

    // member 1 predicts the target exactly; member 0 is constant-ish
    ModelSet ms;
    ms.add(constant_model(0.1, 2));
    Network exact;
    exact.layers.push_back({Matrix::from_rows({{2.0, 0.0}}), {0.0}, Activation::Identity, 0.01});
    ms.add(std::make_shared<NetworkPredictor>(std::move(exact)));
    ms.add(constant_model(5.0, 2));

    ModelSet top = select_top_k(ms, x, y, 1);
    REQUIRE(top.size() == 1);
    auto pred = top.members[0]->predict(x);
    CHECK(r2_score(pred, y) == doctest::Approx(1.0));
}

TEST_CASE("metrics csv renders rows") {
    std::ostringstream out;
    write_metrics_csv(out, {{"rln", 0.5, 0.01}});
    CHECK(out.str().find("ensemble_name,r2,variance\n") == 0);
    CHECK(out.str().find("rln,0.5,0.01") != std::string::npos);
}
