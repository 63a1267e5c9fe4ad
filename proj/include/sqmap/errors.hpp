#pragma once

#include <stdexcept>
#include <string>

namespace sqmap {

// Malformed input file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates a structural requirement (mesh invariants, bad options).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A constrained linear system could not be solved to acceptable residual.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sqmap
