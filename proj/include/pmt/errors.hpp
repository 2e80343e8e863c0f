#pragma once

#include <stdexcept>
#include <string>

namespace pmt {

// Error taxonomy shared by the library and the CLI exit-code mapping.
enum class ErrorKind {
    DegenerateMap,    // |ad - bc| ~ 0
    IdentityMap,      // fixed points of (+/-)Id requested
    BadParameter,     // preset/scene parameter outside its domain
    NoRegion,         // point claimed by no region and not near the boundary
    DepthOverflow,    // arc or resource cap exceeded
    ConfigError,      // malformed scene/config input
    InternalError,    // broken invariant
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace pmt
