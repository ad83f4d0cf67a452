#pragma once

// Dense exact simplex (Bland's rule) for max c.x s.t. A x <= b, x >= 0 with
// b >= 0, so the origin is a feasible starting vertex. Used as an
// independent route to the free-space norm.

#include <vector>

#include "deltakit/freespace.hpp"
#include "deltakit/rational.hpp"

namespace deltakit {

struct LinearProgram {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { optimal, unbounded };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  Rational value;
  std::vector<Rational> x;
};

/// Throws PreconditionError if a row has negative right-hand side or the
/// shapes disagree.
LpResult maximize(const LinearProgram& lp);

/// max{ f(mu) : f 1-Lipschitz, f(base) = 0 } over the whole space.
Rational lipschitz_dual_value(const FreeElement& mu);

}  // namespace deltakit
