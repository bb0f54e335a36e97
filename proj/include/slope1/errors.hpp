// slope1/errors.hpp
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace slope1 {

// A comparison could not be decided from the digits carried.  `needed` is
// the absolute precision that would suffice, or -1 when unknown.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what, int needed = -1)
        : std::runtime_error(what), needed_(needed) {}
    int needed() const noexcept { return needed_; }

private:
    int needed_;
};

// Inputs outside the range where a statement applies (v(a_p) != 1, p < 5,
// r in the wrong residue class, malformed digit strings, ...).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An internal consistency check failed: a linear system that must be
// solvable was not, a module that must be irreducible was not, etc.
class StructureError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace slope1
