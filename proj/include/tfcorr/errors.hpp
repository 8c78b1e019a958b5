#pragma once

#include <stdexcept>
#include <string>

namespace tfcorr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or size mismatch between operands.
struct DimensionError : Error {
  using Error::Error;
};

// Argument outside its admissible domain (parameter range, non-Hermitian input, ...).
struct DomainError : Error {
  using Error::Error;
};

// A selective step left (numerically) zero probability.
struct DegenerateNormalization : Error {
  using Error::Error;
};

}  // namespace tfcorr
