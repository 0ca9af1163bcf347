#pragma once

#include <stdexcept>
#include <string>

namespace automps {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LabelError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct SplitError : Error {
  using Error::Error;
};
struct DegenerateMetricError : Error {
  using Error::Error;
};
struct HermiticityError : Error {
  using Error::Error;
};
struct SymbolError : Error {
  using Error::Error;
};
struct CompositionError : Error {
  using Error::Error;
};
struct SizeError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct EditError : Error {
  using Error::Error;
};
struct GaugeError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};

/// Parse diagnostic carrying a source location.
struct SpecError : Error {
  SpecError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

}  // namespace automps
