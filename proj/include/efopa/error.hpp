#pragma once

#include <stdexcept>
#include <string>

namespace efopa {

/// Argument outside the mathematical domain of a formula (e.g. d = 0, semi-angle >= 90 deg).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-side precondition does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Users are not ordered by non-increasing channel gain.
class OrderingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate input with no meaningful answer (coincident points, all-zero rates).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The objective returned NaN or infinity during optimization.
class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every curve-fit start had a numerically singular Jacobian.
class RankDeficientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration / model file problem. The message carries the field and line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace efopa
