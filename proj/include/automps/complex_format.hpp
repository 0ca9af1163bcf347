#pragma once

#include <string>

#include "automps/tensor.hpp"

namespace automps {

/// Renders a double with up to 17 significant digits (round-trip safe).
std::string format_real(double x);

/// Renders a complex number as `a`, `a+bi` or `a-bi`.
std::string format_complex(Complex z);

/// Parses the literal forms accepted by format_complex. Returns false on
/// malformed input.
bool parse_complex(const std::string& text, Complex& out);

}  // namespace automps
