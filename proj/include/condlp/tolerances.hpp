#pragma once

namespace condlp {

struct Tolerances {
  double feas_tol = 1e-9;
  double opt_tol = 1e-7;
  long max_iters = 100000;
};

}  // namespace condlp
