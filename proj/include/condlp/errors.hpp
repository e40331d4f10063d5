#pragma once

#include <stdexcept>
#include <string>

namespace condlp {

// Bad shapes, non-finite data, out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative solver hit its iteration cap without meeting tolerance.
class SolverNonconvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// c is (numerically) zero, so the ray/hull reformulation of the dual is undefined.
class DegenerateC : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A perturbation that was supposed to change feasibility did not.
class NotAFlip : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace condlp
