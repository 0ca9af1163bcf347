#include "automps/complex_format.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace automps {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    if (std::strtod(probe, nullptr) == x) return probe;
  }
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  std::string out = format_real(z.real());
  std::string im = format_real(z.imag());
  if (!im.empty() && im[0] != '-') out += "+";
  return out + im + "i";
}

bool parse_complex(const std::string& text, Complex& out) {
  if (text.empty()) return false;
  const char* s = text.c_str();
  char* end = nullptr;
  double re = std::strtod(s, &end);
  if (end == s) return false;
  if (*end == '\0') {
    out = Complex(re, 0.0);
    return true;
  }
  if (*end != '+' && *end != '-') return false;
  const char* imag_start = end;
  double im = std::strtod(imag_start, &end);
  if (end == imag_start) return false;
  if (end[0] != 'i' || end[1] != '\0') return false;
  out = Complex(re, im);
  return true;
}

}  // namespace automps
