#ifndef KORANYI_ERRORS_HPP
#define KORANYI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace koranyi {

struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised at a boundary point with |z| below the characteristic threshold
// when no limit value was supplied.
struct CharacteristicPointError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    double partial_value;
    ConvergenceError(const std::string& what, double partial)
        : std::runtime_error(what), partial_value(partial) {}
};

struct CompatibilityError : std::runtime_error {
    double gap;
    CompatibilityError(const std::string& what, double gap_)
        : std::runtime_error(what), gap(gap_) {}
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(const std::string& field_, const std::string& what)
        : std::runtime_error("config field '" + field_ + "': " + what), field(field_) {}
};

} // namespace koranyi

#endif
