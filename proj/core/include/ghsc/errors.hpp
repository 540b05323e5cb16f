#pragma once

#include <stdexcept>
#include <string>

namespace ghsc {

// All library failures derive from Error so callers (the CLI, scan workers)
// can record them per row and keep going.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes disagree (qubit counts, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Lattice dimensions that cannot host a plaquette column or a logical string.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its admissible range (probabilities, couplings, dt).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Problem exceeds an exactness cap (Kraus branches, enumeration size).
class SizeError : public Error {
 public:
  using Error::Error;
};

// A noise channel acts non-trivially on a logical operator.
class LogicalDestroyedError : public Error {
 public:
  using Error::Error;
};

// The requested symmetry sector is not present in the ground space.
class SectorNotFoundError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed; carries the final residual.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Operator expected to be Hermitian is not.
class HermiticityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ghsc
