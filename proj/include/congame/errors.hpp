#pragma once

#include <stdexcept>
#include <string>

namespace congame {

// Malformed input text (game files, numeric flag values).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally readable input that violates a model invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Valid model, but the requested computation has no answer or exceeds a guard.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace congame
