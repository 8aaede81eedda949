#pragma once

#include <stdexcept>
#include <string>

namespace mb {

// Argument outside the physical domain (g >= 1/sqrt(2), non-positive lengths, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Two fields that must share a grid or plane do not.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sampling too coarse for the Fresnel kernel chirp.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero-norm or zero-overlap input where a direction is required.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mb
