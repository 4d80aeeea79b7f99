#pragma once

#include <stdexcept>
#include <string>

namespace lbd {

// Shape/size mismatch between buffers that must agree.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Out-of-range frame/pixel index.
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Non-invertible or otherwise unusable motion.
struct InvalidMotionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad configuration value (weights, schedules, JSON contents).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure inside a solver (non-finite values, indefinite system).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File / format problems.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lbd
