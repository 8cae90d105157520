#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltlab {

/// Argument outside the mathematical domain of an operation (inadmissible
/// exponent, non-positive cone aperture, unsupported constant, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration or data file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense eigensolver hit its sweep cap. `deflated()` is the number of
/// eigenvalues that had already been isolated when it gave up.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t deflated)
      : std::runtime_error(what), deflated_(deflated) {}

  std::size_t deflated() const noexcept { return deflated_; }

 private:
  std::size_t deflated_;
};

/// Root continuation in the square-well oracle could not proceed.
/// `last_good_imag()` is the last imaginary depth reached with all roots.
class ContinuationError : public std::runtime_error {
 public:
  ContinuationError(const std::string& what, double last_good_imag)
      : std::runtime_error(what), last_good_imag_(last_good_imag) {}

  double last_good_imag() const noexcept { return last_good_imag_; }

 private:
  double last_good_imag_;
};

}  // namespace ltlab
