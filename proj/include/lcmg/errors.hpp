#pragma once

#include <stdexcept>
#include <string>

namespace lcmg {

/// Raised when a computation would exceed a configured resource cap
/// (quotient order, ball radius, moment degree, eigensolve dimension).
/// The message names the cap so callers can report it.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lcmg
