#ifndef RLN_MODEL_IO_HPP
#define RLN_MODEL_IO_HPP

#include <optional>
#include <string>

#include "rln/data.hpp"
#include "rln/network.hpp"
#include "rln/regularizer.hpp"
#include "rln/trainer.hpp"

namespace rln {

/// On-disk model: network plus, when present, the per-weight coefficients,
/// the config that produced it, and the feature scaler it was trained with.
struct ModelDocument {
    Network net;
    std::optional<RegCoefficients> coeffs;
    std::optional<TrainConfig> config;
    std::optional<Scaler> scaler;
};

/// Self-describing JSON text document; all 64-bit values round-trip
/// bit-exactly (shortest round-trip decimal encoding).
void save_model(const ModelDocument& doc, const std::string& path);
std::string model_to_string(const ModelDocument& doc);

ModelDocument load_model(const std::string& path);
ModelDocument model_from_string(const std::string& text);

} // namespace rln

#endif
