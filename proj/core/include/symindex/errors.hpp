#pragma once

#include <stdexcept>
#include <string>

namespace symindex {

// An input violates a documented invariant (bad angle, dimension mismatch,
// inconsistent nullity, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Certified arithmetic could not separate a quantity from a threshold within
// the refinement budget. The caller may retry with a larger budget or a
// tighter input enclosure; no guessed answer is ever returned instead.
class Undecidable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The jump-tuple scan exhausted its N range. This is a statement about the
// search bounds only.
class NoTupleFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A geodesic claimed to sit at the peak i + nu = 2N + (n - 1) has census data
// incompatible with the forced vanishing constraints.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symindex
