#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lswe/expr.hpp"

namespace lswe {

/**
 * Value and partial derivatives of an expression at one point, computed by
 * forward-mode Taylor arithmetic (no finite differences anywhere).
 *
 * Symmetric tensors are stored once: the Hessian keeps entries with i <= j,
 * the third-order tensor entries with i <= j <= k, both in lexicographic
 * order.  Accessors sort their indices, so hess(0,1) and hess(1,0) read the
 * same slot by construction.
 */
struct TaylorJet {
  int dimension = 0;
  int order = 0;
  double value = 0.0;
  std::vector<double> gradient;  // size N            (order >= 1)
  std::vector<double> hessian;   // size N(N+1)/2     (order >= 2)
  std::vector<double> third;     // size N(N+1)(N+2)/6 (order == 3)

  double grad(int i) const { return gradient[static_cast<std::size_t>(i)]; }
  double hess(int i, int j) const { return hessian[hess_index(i, j, dimension)]; }
  double third_at(int i, int j, int k) const { return third[third_index(i, j, k, dimension)]; }

  /** Packed index of Hessian entry (i,j); indices may come in any order. */
  static std::size_t hess_index(int i, int j, int n);
  /** Packed index of third-derivative entry (i,j,k); indices may come in any order. */
  static std::size_t third_index(int i, int j, int k, int n);
};

/**
 * Differentiate `expr` at `point` up to `order` in {1, 2, 3}.
 *
 * Exact (up to rounding) for polynomial expressions; derivative rules for
 * sin/cos/exp/log/sqrt/tanh are applied analytically.  Throws DomainError
 * where the expression or one of its derivatives is undefined (log/sqrt need
 * strictly positive arguments once derivatives are requested).
 */
TaylorJet derive(const PotentialExpr& expr, std::span<const double> point, int order);

}  // namespace lswe
