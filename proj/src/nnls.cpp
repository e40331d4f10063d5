#include <algorithm>
#include <cmath>
#include <limits>

#include "condlp/kernels.hpp"

namespace condlp {

Vector nnls(const Matrix& E, const Vector& f, long max_iters) {
  const Index q = E.cols();
  if (E.rows() != f.size()) throw InvalidInput("nnls: shape mismatch");
  Vector w = Vector::Zero(q);
  if (q == 0) return w;
  if (max_iters <= 0) max_iters = 30 * q + 100;
  std::vector<bool> passive(static_cast<size_t>(q), false);
  const double tol = 1e-13 * std::max(1.0, E.norm() * std::max(f.norm(), 1e-300));

  auto solve_passive = [&](Vector& s) {
    std::vector<Index> idx;
    for (Index j = 0; j < q; ++j)
      if (passive[static_cast<size_t>(j)]) idx.push_back(j);
    Matrix EP(E.rows(), static_cast<Index>(idx.size()));
    for (size_t t = 0; t < idx.size(); ++t) EP.col(static_cast<Index>(t)) = E.col(idx[t]);
    const Vector sp = EP.completeOrthogonalDecomposition().solve(f);
    s = Vector::Zero(q);
    for (size_t t = 0; t < idx.size(); ++t) s(idx[t]) = sp(static_cast<Index>(t));
  };

  long iters = 0;
  while (iters++ < max_iters) {
    const Vector g = E.transpose() * (f - E * w);
    Index jmax = -1;
    double gmax = tol;
    for (Index j = 0; j < q; ++j)
      if (!passive[static_cast<size_t>(j)] && g(j) > gmax) {
        gmax = g(j);
        jmax = j;
      }
    if (jmax < 0) break;
    passive[static_cast<size_t>(jmax)] = true;
    while (iters++ < max_iters) {
      Vector s;
      solve_passive(s);
      bool all_pos = true;
      for (Index j = 0; j < q; ++j)
        if (passive[static_cast<size_t>(j)] && s(j) <= 0.0) all_pos = false;
      if (all_pos) {
        w = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < q; ++j)
        if (passive[static_cast<size_t>(j)] && s(j) <= 0.0)
          alpha = std::min(alpha, w(j) / (w(j) - s(j)));
      w += alpha * (s - w);
      for (Index j = 0; j < q; ++j)
        if (passive[static_cast<size_t>(j)] && w(j) <= 1e-15 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
          passive[static_cast<size_t>(j)] = false;
          w(j) = 0.0;
        }
    }
  }
  return w.cwiseMax(0.0);
}

}  // namespace condlp
