#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unb {

// Requested draw exceeds the number of units the urn can supply.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All urn weights are zero; no arm can be drawn.
struct DegenerateUrnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target correlation is outside the range the chosen marginals can attain.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An arm required by a downstream formula has zero cumulative weight.
struct ArmUnestimableError : std::runtime_error {
    ArmUnestimableError(std::size_t arm_index, const std::string& what)
        : std::runtime_error(what), arm(arm_index) {}
    std::size_t arm;
};

}  // namespace unb
