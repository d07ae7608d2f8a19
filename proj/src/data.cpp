#include "rln/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rln/errors.hpp"
#include "rln/rng.hpp"

namespace rln {

std::string split_tag_name(SplitTag t) {
    switch (t) {
        case SplitTag::Train: return "train";
        case SplitTag::Validation: return "validation";
        case SplitTag::Test: return "test";
    }
    return "?";
}

std::vector<std::size_t> Dataset::indices_of(SplitTag tag) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < split.size(); ++i)
        if (split[i] == tag) idx.push_back(i);
    return idx;
}

std::pair<Matrix, std::vector<double>> Dataset::subset(SplitTag tag) const {
    auto idx = indices_of(tag);
    Matrix m(idx.size(), dims());
    std::vector<double> y(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double* src = features.row(idx[r]);
        std::copy(src, src + dims(), m.row(r));
        y[r] = targets[idx[r]];
    }
    return {std::move(m), std::move(y)};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_cell(const std::string& raw, double& out) {
    std::string s = trim(raw);
    if (s.empty()) return false; // missing
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DataError("non-numeric cell: '" + s + "'");
    }
    if (pos != s.size()) throw DataError("non-numeric cell: '" + s + "'");
    return true;
}

const char* kDoubleFmt = "%.17g";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), kDoubleFmt, v);
    return buf;
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& target_column,
                 MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty file: " + path);

    auto names = split_line(header);
    for (auto& n : names) n = trim(n);
    std::size_t target_idx = names.size();
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == target_column) target_idx = j;
    if (target_idx == names.size())
        throw DataError("target column '" + target_column + "' not found in " + path);

    Dataset ds;
    for (std::size_t j = 0; j < names.size(); ++j)
        if (j != target_idx) ds.feature_names.push_back(names[j]);
    {
        std::set<std::string> uniq(ds.feature_names.begin(), ds.feature_names.end());
        if (uniq.size() != ds.feature_names.size())
            throw DataError("duplicate feature names in " + path);
    }

    const std::size_t d = ds.feature_names.size();
    std::vector<std::vector<double>> rows;   // parsed feature rows
    std::vector<std::vector<bool>> missing;  // per-cell missing flags
    std::vector<double> targets;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != names.size())
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(names.size()) + " cells, got " +
                            std::to_string(cells.size()));
        std::vector<double> row(d, 0.0);
        std::vector<bool> miss(d, false);
        double target = 0.0;
        bool target_present = false;
        std::size_t fj = 0;
        bool any_missing = false;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v = 0.0;
            bool present = parse_cell(cells[j], v);
            if (j == target_idx) {
                target = v;
                target_present = present;
            } else {
                row[fj] = v;
                miss[fj] = !present;
                any_missing = any_missing || !present;
                ++fj;
            }
        }
        if (!target_present) continue; // no label, row unusable under either policy
        if (any_missing && policy == MissingPolicy::RejectRow) continue;
        rows.push_back(std::move(row));
        missing.push_back(std::move(miss));
        targets.push_back(target);
    }
    if (rows.empty()) throw DataError("no usable rows in " + path);

    if (policy == MissingPolicy::MeanImpute) {
        for (std::size_t j = 0; j < d; ++j) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (!missing[i][j]) { sum += rows[i][j]; ++n; }
            double fill = n > 0 ? sum / static_cast<double>(n) : 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (missing[i][j]) rows[i][j] = fill;
        }
    }

    ds.features = Matrix(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), ds.features.row(i));
    ds.targets = std::move(targets);
    ds.split.assign(ds.rows(), SplitTag::Train);
    return ds;
}

void write_csv(const Dataset& ds, std::ostream& out, const std::string& target_name) {
    for (const auto& n : ds.feature_names) out << n << ',';
    out << target_name << '\n';
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const double* row = ds.features.row(i);
        for (std::size_t j = 0; j < ds.dims(); ++j) out << format_double(row[j]) << ',';
        out << format_double(ds.targets[i]) << '\n';
    }
}

void write_csv_file(const Dataset& ds, const std::string& path, const std::string& target_name) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    write_csv(ds, out, target_name);
}

Matrix Scaler::apply(const Matrix& features) const {
    if (features.cols() != mean.size())
        throw ConfigError("scaler: feature width mismatch");
    Matrix out = features;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j)
            row[j] = (row[j] - mean[j]) / std_dev[j];
    }
    return out;
}

std::pair<Dataset, Scaler> standardize(const Dataset& ds) {
    auto train_idx = ds.indices_of(SplitTag::Train);
    if (train_idx.empty()) throw DataError("standardize: training split is empty");

    const std::size_t d = ds.dims();
    const double n = static_cast<double>(train_idx.size());
    Scaler scaler;
    scaler.mean.assign(d, 0.0);
    scaler.std_dev.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (auto i : train_idx) sum += ds.features(i, j);
        scaler.mean[j] = sum / n;
        double ss = 0.0;
        for (auto i : train_idx) {
            double v = ds.features(i, j) - scaler.mean[j];
            ss += v * v;
        }
        double sd = std::sqrt(ss / n);
        scaler.std_dev[j] = sd > 0.0 ? sd : 1.0; // constant columns map to zeros
    }

    Dataset out = ds;
    out.features = scaler.apply(ds.features);
    return {std::move(out), std::move(scaler)};
}

Dataset split_dataset(const Dataset& ds, double train_frac, double validation_frac,
                      double test_frac, std::uint64_t seed) {
    if (train_frac < 0.0 || validation_frac < 0.0 || test_frac < 0.0)
        throw ConfigError("split: fractions must be nonnegative");
    if (std::fabs(train_frac + validation_frac + test_frac - 1.0) > 1e-9)
        throw ConfigError("split: fractions must sum to 1");

    const std::size_t m = ds.rows();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(m)));
    auto n_train_val = static_cast<std::size_t>(
        std::llround((train_frac + validation_frac) * static_cast<double>(m)));
    n_train = std::min(n_train, m);
    n_train_val = std::min(std::max(n_train_val, n_train), m);

    Dataset out = ds;
    out.split.assign(m, SplitTag::Test);
    for (std::size_t r = 0; r < m; ++r) {
        SplitTag tag = r < n_train ? SplitTag::Train
                     : r < n_train_val ? SplitTag::Validation
                                       : SplitTag::Test;
        out.split[order[r]] = tag;
    }
    return out;
}

Dataset merge_validation_into_train(const Dataset& ds) {
    Dataset out = ds;
    for (auto& tag : out.split)
        if (tag == SplitTag::Validation) tag = SplitTag::Train;
    return out;
}

std::vector<double> feature_r2(const Dataset& ds) {
    auto [x, y] = ds.subset(SplitTag::Train);
    if (x.rows() < 2) throw DataError("feature_r2: needs at least 2 training samples");
    const std::size_t m = x.rows(), d = x.cols();
    const double n = static_cast<double>(m);

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= n;
    double y_var = 0.0;
    for (double v : y) y_var += (v - y_mean) * (v - y_mean);

    std::vector<double> r2(d, 0.0);
    if (y_var == 0.0) return r2;
    for (std::size_t j = 0; j < d; ++j) {
        double x_mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) x_mean += x(i, j);
        x_mean /= n;
        double x_var = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double dx = x(i, j) - x_mean;
            x_var += dx * dx;
            cov += dx * (y[i] - y_mean);
        }
        r2[j] = x_var == 0.0 ? 0.0 : (cov * cov) / (x_var * y_var);
    }
    return r2;
}

SynthData synth_generate(const SynthConfig& cfg) {
    if (cfg.n_informative > cfg.n_features)
        throw ConfigError("synth: n_informative exceeds n_features");
    if (!(cfg.decay > 0.0 && cfg.decay <= 1.0))
        throw ConfigError("synth: decay must be in (0, 1]");
    if (!(cfg.noise_r2 >= 0.0 && cfg.noise_r2 < 1.0))
        throw ConfigError("synth: noise_r2 must be in [0, 1)");
    if (cfg.n_samples < 1 || cfg.n_features < 1)
        throw ConfigError("synth: need at least one sample and one feature");
    if (cfg.interaction_pairs > 0 && cfg.n_informative < 2)
        throw ConfigError("synth: interaction pairs need at least 2 informative features");

    SynthData out;
    out.meta.config = cfg;
    Rng rng(cfg.seed);

    const std::size_t m = cfg.n_samples, d = cfg.n_features;
    out.dataset.features = Matrix(m, d);
    for (double& v : out.dataset.features.data()) v = rng.normal();

    for (std::size_t j = 0; j < cfg.n_informative; ++j)
        out.meta.betas.push_back(std::pow(cfg.decay, static_cast<double>(j)));
    for (std::size_t k = 0; k < cfg.interaction_pairs; ++k) {
        std::size_t a = k % cfg.n_informative;
        std::size_t b = (k + 1) % cfg.n_informative;
        out.meta.interactions.emplace_back(a, b, std::pow(cfg.decay, static_cast<double>(k)));
    }

    std::vector<double> signal(m, 0.0);
    const Matrix& x = out.dataset.features;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cfg.n_informative; ++j)
            s += out.meta.betas[j] * x(i, j);
        for (const auto& [a, b, gamma] : out.meta.interactions)
            s += gamma * x(i, a) * x(i, b);
        signal[i] = s;
    }

    double noise_std = 0.0;
    if (cfg.noise_r2 > 0.0) {
        double mean = 0.0;
        for (double s : signal) mean += s;
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (double s : signal) var += (s - mean) * (s - mean);
        var /= static_cast<double>(m);
        noise_std = std::sqrt(var * cfg.noise_r2 / (1.0 - cfg.noise_r2));
    }

    out.dataset.targets.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        out.dataset.targets[i] = signal[i] + (noise_std > 0.0 ? noise_std * rng.normal() : 0.0);

    out.dataset.feature_names.reserve(d);
    for (std::size_t j = 0; j < d; ++j)
        out.dataset.feature_names.push_back("x" + std::to_string(j));
    out.dataset.split.assign(m, SplitTag::Train);
    return out;
}

void write_synth_meta(const SynthMeta& meta, const std::string& path) {
    nlohmann::json j;
    j["betas"] = meta.betas;
    auto& inter = j["interactions"] = nlohmann::json::array();
    for (const auto& [a, b, gamma] : meta.interactions)
        inter.push_back({{"a", a}, {"b", b}, {"gamma", gamma}});
    j["config"] = {
        {"n_samples", meta.config.n_samples},
        {"n_features", meta.config.n_features},
        {"n_informative", meta.config.n_informative},
        {"decay", meta.config.decay},
        {"interaction_pairs", meta.config.interaction_pairs},
        {"noise_r2", meta.config.noise_r2},
        {"seed", meta.config.seed},
    };
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace rln
