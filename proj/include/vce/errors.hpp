#pragma once

#include <stdexcept>
#include <string>

namespace vce {

// Malformed external input: DIMACS text or a structured document.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vce
