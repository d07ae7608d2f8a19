#ifndef RLN_ERRORS_HPP
#define RLN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rln {

/// Invalid configuration or structurally incompatible arguments
/// (width mismatches, bad hyperparameters, malformed grids).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problems with input files or dataset contents.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values encountered during numeric work. Carries whatever
/// context the thrower had (layer index, step index).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operations called out of order (e.g. a coefficient update with no
/// preceding weight update).
class SequencingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace rln

#endif
