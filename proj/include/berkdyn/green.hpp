#pragma once

#include <vector>

#include "berkdyn/cover.hpp"
#include "berkdyn/skew.hpp"

namespace berkdyn {

/**
 * Value of the non-Archimedean Green function at a point: an exact
 * nonpositive rational for escaping orbits, −∞ on certified members of the
 * invariant set, or Unresolved after the iteration budget.
 */
struct GreenValue {
    enum class Kind { Value, MinusInfinity, Unresolved };
    Kind kind = Kind::Unresolved;
    Rat value;     // meaningful when kind == Value
    int steps = 0; // stopping step, certification step, or budget
};

/**
 * g_na(x) = lim (d/c)^n log|f_⋄^n(x)|, evaluated by iterating until the
 * norm exponent lands strictly inside the trapping annulus (0, t_ρ); exact
 * stationarity from that step on makes the limit a finite computation.
 */
GreenValue g_na(const SkewMap& f, const BerkPoint& x, int budget = 32);

struct GreenCheckReport {
    int resolved = 0;
    int unresolved = 0;
    int violations = 0;
};

/// Verify g_na(f_⋄ x) = (c/d)·g_na(x) exactly on the supplied samples.
GreenCheckReport functional_equation_check(const SkewMap& f,
                                           const std::vector<BerkPoint>& xs,
                                           int budget = 32);

} // namespace berkdyn
