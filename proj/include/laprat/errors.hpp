#pragma once

#include <stdexcept>
#include <string>

namespace laprat {

// Evaluation requested below the abscissa of convergence (plus margin).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The head function of a concatenation must vanish past the junction.
struct NonVanishingHead : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssumptionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadNormalization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IdenticalFunctions : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace laprat
