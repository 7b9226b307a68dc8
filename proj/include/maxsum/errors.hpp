#pragma once

#include <stdexcept>
#include <string>

namespace maxsum {

/// A resource budget (jumps per path, retry count) was exhausted.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Conditional rejection sampling fell below its acceptance floor.
struct RejectionBudgetError : std::runtime_error {
    explicit RejectionBudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace maxsum
