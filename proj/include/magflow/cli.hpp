#pragma once

// Command-line front end. dispatch() owns the full lifecycle of one
// invocation and returns the process exit code: 0 on success, 2 for bad
// arguments, bad input data, or I/O failures, 3 when a verification check
// exceeds its tolerance. Result data goes to out, diagnostics to err.

#include <iosfwd>
#include <optional>
#include <string>

#include "magflow/periodicity.hpp"

namespace magflow::cli {

// Numeric argument that remembers the exact fraction when the text was one
// ("29/36", "-3"); decimals and scientific notation carry only the double.
struct ExactReal {
    double value = 0.0;
    std::optional<periodicity::Rational> exact;
};

[[nodiscard]] ExactReal parse_exact_real(const std::string& text);

[[nodiscard]] int dispatch(int argc, const char* const* argv, std::ostream& out,
                           std::ostream& err);

} // namespace magflow::cli
