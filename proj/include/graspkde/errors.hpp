#pragma once

#include <stdexcept>
#include <string>

namespace graspkde {

/// Bad input data: unreadable or malformed files, invalid dimensions,
/// inconsistent training inputs. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degenerate model state: empty feature sets, underflowed conditionals,
/// no curvature overlap, all-zero contact norms, populations with no
/// surviving candidate. CLI maps this to exit code 3.
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace graspkde
