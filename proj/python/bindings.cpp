// Python bindings for the core operations: data generation, training,
// prediction, evaluation, and interpretability analysis.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rln/analysis.hpp"
#include "rln/data.hpp"
#include "rln/ensemble.hpp"
#include "rln/errors.hpp"
#include "rln/model_io.hpp"
#include "rln/trainer.hpp"

namespace py = pybind11;
using namespace rln;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw ConfigError("expected a 2-d array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

py::array_t<double> matrix_to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::array_t<double> vector_to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ImportanceVector importance_from_numpy(const py::array_t<double>& a) {
    ImportanceVector v;
    auto buf = a.unchecked<1>();
    v.values.resize(static_cast<std::size_t>(buf.shape(0)));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i) v.values[static_cast<std::size_t>(i)] = buf(i);
    bool any = false;
    for (double x : v.values) any = any || x != 0.0;
    v.all_zero = !any;
    return v;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "regularization learning networks: training and analysis for tabular data";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<Norm>(m, "Norm").value("l1", Norm::L1).value("l2", Norm::L2);
    py::enum_<Mode>(m, "Mode")
        .value("rln", Mode::Rln)
        .value("dnn_uniform", Mode::DnnUniform)
        .value("linear", Mode::Linear);
    py::enum_<WeightUpdate>(m, "WeightUpdate")
        .value("subgradient", WeightUpdate::Subgradient)
        .value("proximal", WeightUpdate::Proximal);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("eta", &TrainConfig::eta)
        .def_readwrite("nu", &TrainConfig::nu)
        .def_readwrite("theta", &TrainConfig::theta)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("norm", &TrainConfig::norm)
        .def_readwrite("mode", &TrainConfig::mode)
        .def_readwrite("weight_update", &TrainConfig::weight_update)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("sparsity_epsilon", &TrainConfig::sparsity_epsilon)
        .def_readwrite("trajectory_edges", &TrainConfig::trajectory_edges);

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_samples", &SynthConfig::n_samples)
        .def_readwrite("n_features", &SynthConfig::n_features)
        .def_readwrite("n_informative", &SynthConfig::n_informative)
        .def_readwrite("decay", &SynthConfig::decay)
        .def_readwrite("interaction_pairs", &SynthConfig::interaction_pairs)
        .def_readwrite("noise_r2", &SynthConfig::noise_r2)
        .def_readwrite("seed", &SynthConfig::seed);

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("features",
                               [](const Dataset& ds) { return matrix_to_numpy(ds.features); })
        .def_property_readonly("targets",
                               [](const Dataset& ds) { return vector_to_numpy(ds.targets); })
        .def_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("rows", &Dataset::rows)
        .def_property_readonly("dims", &Dataset::dims)
        .def("split_counts", [](const Dataset& ds) {
            return py::make_tuple(ds.count_of(SplitTag::Train), ds.count_of(SplitTag::Validation),
                                  ds.count_of(SplitTag::Test));
        });

    py::class_<SynthData>(m, "SynthData")
        .def_readonly("dataset", &SynthData::dataset)
        .def_property_readonly("betas",
                               [](const SynthData& sd) { return vector_to_numpy(sd.meta.betas); });

    m.def("synth_generate", &synth_generate, py::arg("config"));
    m.def(
        "load_csv",
        [](const std::string& path, const std::string& target, bool mean_impute) {
            return load_csv(path, target,
                            mean_impute ? MissingPolicy::MeanImpute : MissingPolicy::RejectRow);
        },
        py::arg("path"), py::arg("target_column"), py::arg("mean_impute") = false,
        "Load a CSV dataset; rows with missing cells are dropped unless mean_impute is set.");
    m.def(
        "split_dataset",
        [](const Dataset& ds, double train, double val, double test, std::uint64_t seed) {
            return split_dataset(ds, train, val, test, seed);
        },
        py::arg("dataset"), py::arg("train_frac"), py::arg("validation_frac"),
        py::arg("test_frac"), py::arg("seed"));
    m.def(
        "standardize",
        [](const Dataset& ds) {
            auto [out, scaler] = standardize(ds);
            return py::make_tuple(out, vector_to_numpy(scaler.mean),
                                  vector_to_numpy(scaler.std_dev));
        },
        py::arg("dataset"));
    m.def(
        "feature_r2", [](const Dataset& ds) { return vector_to_numpy(feature_r2(ds)); },
        py::arg("dataset"));

    py::class_<Network>(m, "Network")
        .def_property_readonly("input_width", &Network::input_width)
        .def_property_readonly("output_width", &Network::output_width)
        .def_property_readonly("weight_count", &Network::weight_count)
        .def("predict",
             [](const Network& net, const py::array_t<double>& x) {
                 return vector_to_numpy(forward(net, matrix_from_numpy(x)));
             })
        .def("layer_weights", [](const Network& net, std::size_t k) {
            if (k >= net.layers.size()) throw ConfigError("layer index out of range");
            return matrix_to_numpy(net.layers[k].weights);
        });

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("net", &TrainResult::net)
        .def_property_readonly("lambdas",
                               [](const TrainResult& r) {
                                   py::list out;
                                   for (const auto& lam : r.coeffs.lambdas)
                                       out.append(matrix_to_numpy(lam));
                                   return out;
                               })
        .def_property_readonly("epoch_train_loss", [](const TrainResult& r) {
            std::vector<double> losses;
            for (const auto& e : r.record.epochs) losses.push_back(e.train_loss);
            return vector_to_numpy(losses);
        });

    m.def(
        "train",
        [](const Dataset& ds, const std::vector<std::size_t>& hidden, const TrainConfig& cfg) {
            if (cfg.mode == Mode::Linear) return train_linear(ds, cfg);
            return train(ds, make_mlp_arch(ds.dims(), hidden), cfg);
        },
        py::arg("dataset"), py::arg("hidden"), py::arg("config"));
    m.def("train_linear", &train_linear, py::arg("dataset"), py::arg("config"));

    m.def(
        "save_model",
        [](const std::string& path, const TrainResult& result) {
            save_model({result.net, result.coeffs, std::nullopt, std::nullopt}, path);
        },
        py::arg("path"), py::arg("result"));
    m.def(
        "load_model", [](const std::string& path) { return load_model(path).net; },
        py::arg("path"));

    m.def(
        "mse_loss",
        [](const py::array_t<double>& pred, const py::array_t<double>& y) {
            auto p = pred.cast<std::vector<double>>();
            auto t = y.cast<std::vector<double>>();
            return mse_loss(p, t);
        },
        py::arg("predictions"), py::arg("targets"));
    m.def(
        "r2_score",
        [](const py::array_t<double>& pred, const py::array_t<double>& y) {
            auto p = pred.cast<std::vector<double>>();
            auto t = y.cast<std::vector<double>>();
            return r2_score(p, t);
        },
        py::arg("predictions"), py::arg("targets"));

    m.def(
        "garson_importance",
        [](const Network& net) {
            auto imp = garson_importance(net);
            return py::make_tuple(vector_to_numpy(imp.values), imp.all_zero);
        },
        py::arg("net"));
    m.def(
        "importance_entropy",
        [](const py::array_t<double>& values) {
            return importance_entropy(importance_from_numpy(values));
        },
        py::arg("importance"));
    m.def(
        "js_divergence",
        [](const py::array_t<double>& p, const py::array_t<double>& q) {
            return js_divergence(importance_from_numpy(p), importance_from_numpy(q));
        },
        py::arg("p"), py::arg("q"));

    py::class_<SparsityReport>(m, "SparsityReport")
        .def_readonly("layer_zero_fraction", &SparsityReport::layer_zero_fraction)
        .def_readonly("network_zero_fraction", &SparsityReport::network_zero_fraction)
        .def_readonly("eliminated_features", &SparsityReport::eliminated_features)
        .def_readonly("eliminated_feature_fraction", &SparsityReport::eliminated_feature_fraction)
        .def_readonly("epsilon", &SparsityReport::epsilon);
    m.def("sparsity_report", &sparsity_report, py::arg("net"), py::arg("epsilon") = 0.0);

    m.def(
        "ensemble_predict",
        [](const std::vector<Network>& nets, const py::array_t<double>& x) {
            ModelSet ms;
            for (const auto& net : nets) ms.add(std::make_shared<NetworkPredictor>(net));
            return vector_to_numpy(ensemble_predict(ms, matrix_from_numpy(x)));
        },
        py::arg("nets"), py::arg("inputs"));
    m.def(
        "prediction_variance",
        [](const std::vector<Network>& nets, const py::array_t<double>& x) {
            ModelSet ms;
            for (const auto& net : nets) ms.add(std::make_shared<NetworkPredictor>(net));
            return prediction_variance(ms, matrix_from_numpy(x));
        },
        py::arg("nets"), py::arg("inputs"));

    m.attr("__version__") = "0.1.0";
}
