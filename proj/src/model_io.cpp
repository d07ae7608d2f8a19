#include "rln/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rln/errors.hpp"

namespace rln {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.data(); // row-major
    return j;
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.size()) throw DataError("model file: matrix size mismatch");
    m.data() = std::move(data);
    return m;
}

json config_to_json(const TrainConfig& cfg) {
    return json{
        {"eta", cfg.eta},
        {"nu", cfg.nu},
        {"theta", cfg.theta},
        {"epochs", cfg.epochs},
        {"batch_size", cfg.batch_size},
        {"norm", norm_name(cfg.norm)},
        {"mode", mode_name(cfg.mode)},
        {"weight_update", weight_update_name(cfg.weight_update)},
        {"seed", cfg.seed},
        {"sparsity_epsilon", cfg.sparsity_epsilon},
        {"trajectory_edges", cfg.trajectory_edges},
    };
}

TrainConfig config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.eta = j.at("eta").get<double>();
    cfg.nu = j.at("nu").get<double>();
    cfg.theta = j.at("theta").get<double>();
    cfg.epochs = j.at("epochs").get<std::size_t>();
    cfg.batch_size = j.at("batch_size").get<std::size_t>();
    cfg.norm = norm_from_name(j.at("norm").get<std::string>());
    cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    cfg.weight_update = weight_update_from_name(j.at("weight_update").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.sparsity_epsilon = j.at("sparsity_epsilon").get<double>();
    cfg.trajectory_edges = j.at("trajectory_edges").get<std::size_t>();
    return cfg;
}

} // namespace

std::string model_to_string(const ModelDocument& doc) {
    json j;
    j["format"] = "rln-model";
    j["format_version"] = 1;
    auto& layers = j["layers"] = json::array();
    for (const auto& l : doc.net.layers) {
        json lj;
        lj["input_width"] = l.input_width();
        lj["output_width"] = l.output_width();
        lj["activation"] = activation_name(l.activation);
        lj["leaky_slope"] = l.leaky_slope;
        lj["weights"] = l.weights.data(); // row-major
        lj["bias"] = l.bias;
        layers.push_back(std::move(lj));
    }
    if (doc.coeffs) {
        json rj;
        rj["norm"] = norm_name(doc.coeffs->norm);
        rj["theta"] = doc.coeffs->theta;
        auto& lam = rj["lambdas"] = json::array();
        for (const auto& m : doc.coeffs->lambdas) lam.push_back(matrix_to_json(m));
        j["reg"] = std::move(rj);
    } else {
        j["reg"] = nullptr;
    }
    j["train_config"] = doc.config ? config_to_json(*doc.config) : json(nullptr);
    if (doc.scaler) {
        j["scaler"] = {{"mean", doc.scaler->mean}, {"std", doc.scaler->std_dev}};
    } else {
        j["scaler"] = nullptr;
    }
    return j.dump(2) + "\n";
}

void save_model(const ModelDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << model_to_string(doc);
}

ModelDocument model_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "rln-model")
            throw DataError("model file: unexpected format tag");
        if (j.at("format_version").get<int>() != 1)
            throw DataError("model file: unsupported format version");

        ModelDocument doc;
        for (const auto& lj : j.at("layers")) {
            Layer layer;
            layer.activation = activation_from_name(lj.at("activation").get<std::string>());
            layer.leaky_slope = lj.at("leaky_slope").get<double>();
            const auto rows = lj.at("output_width").get<std::size_t>();
            const auto cols = lj.at("input_width").get<std::size_t>();
            layer.weights = Matrix(rows, cols);
            auto w = lj.at("weights").get<std::vector<double>>();
            if (w.size() != rows * cols) throw DataError("model file: weight count mismatch");
            layer.weights.data() = std::move(w);
            layer.bias = lj.at("bias").get<std::vector<double>>();
            if (layer.bias.size() != rows) throw DataError("model file: bias count mismatch");
            doc.net.layers.push_back(std::move(layer));
        }
        if (doc.net.layers.empty()) throw DataError("model file: no layers");
        for (std::size_t k = 1; k < doc.net.layers.size(); ++k)
            if (doc.net.layers[k].input_width() != doc.net.layers[k - 1].output_width())
                throw DataError("model file: adjacent layer widths disagree");
        if (!doc.net.all_finite()) throw DataError("model file: non-finite weights");

        if (!j.at("reg").is_null()) {
            const auto& rj = j.at("reg");
            RegCoefficients coeffs;
            coeffs.norm = norm_from_name(rj.at("norm").get<std::string>());
            coeffs.theta = rj.at("theta").get<double>();
            for (const auto& mj : rj.at("lambdas"))
                coeffs.lambdas.push_back(matrix_from_json(mj));
            if (!coeffs.congruent_with(doc.net))
                throw DataError("model file: coefficient shapes do not match weights");
            doc.coeffs = std::move(coeffs);
        }
        if (!j.at("train_config").is_null())
            doc.config = config_from_json(j.at("train_config"));
        if (j.contains("scaler") && !j.at("scaler").is_null()) {
            Scaler s;
            s.mean = j.at("scaler").at("mean").get<std::vector<double>>();
            s.std_dev = j.at("scaler").at("std").get<std::vector<double>>();
            if (s.mean.size() != doc.net.input_width() || s.std_dev.size() != s.mean.size())
                throw DataError("model file: scaler width mismatch");
            doc.scaler = std::move(s);
        }
        return doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
}

ModelDocument load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return model_from_string(buf.str());
}

} // namespace rln
