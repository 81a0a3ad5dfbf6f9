#pragma once

#include <stdexcept>
#include <string>

namespace ncma {

// Precondition violations on arguments. The CLI maps these to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Valid request the domain refuses (colliding design, no injective
// offset, ...). The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

} // namespace ncma
