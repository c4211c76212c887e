#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "berkdyn/coeff.hpp"

namespace berkdyn {

/// Dense univariate polynomial over the coefficient field; index = degree.
using CoeffPoly = std::vector<Coefficient>;

Coefficient poly_eval(const CoeffPoly& p, const Coefficient& x);
CoeffPoly poly_derivative(const CoeffPoly& p);

/// Continued-fraction reconstruction of a nearby rational.
std::optional<Rat> reconstruct_rational(double x, long max_den = 100000000L,
                                        double tol = 1e-9);

/**
 * All roots of p in the coefficient field, with multiplicities,
 * in canonical (lexicographic) order; multiplicities sum to deg p.
 *
 * Exact mode: square-free decomposition, then exact formulas for low degree
 * and a verified numeric-reconstruction fallback; roots are certified by
 * exact back-substitution. SplittingFieldRequired when p does not split
 * over ℚ(i). Numeric mode: Durand–Kerner with root clustering.
 */
std::vector<std::pair<Coefficient, int>> coeff_poly_roots(const CoeffPoly& p);

} // namespace berkdyn
