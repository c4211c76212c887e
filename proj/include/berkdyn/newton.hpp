#pragma once

#include <vector>

#include "berkdyn/series.hpp"

namespace berkdyn {

/// Polynomial in w with Puiseux-series coefficients; index = w-degree.
using SeriesPoly = std::vector<PuiseuxSeries>;

PuiseuxSeries series_poly_eval(const SeriesPoly& P, const PuiseuxSeries& x);
SeriesPoly series_poly_derivative(const SeriesPoly& P);

struct PuiseuxRoot {
    PuiseuxSeries root;
    int multiplicity;
};

/**
 * Newton-polygon root lifting: all roots of a monic P ∈ 𝕃[w], counted with
 * multiplicity, each correct modulo z^precision. Polygon segments are
 * processed in increasing slope order and characteristic roots in canonical
 * (lexicographic) order, so the output order is deterministic.
 *
 * Throws SplittingFieldRequired when a characteristic equation does not
 * split over the coefficient field (exact mode), and InsufficientPrecision
 * when coefficient truncations cannot certify the polygon.
 */
std::vector<PuiseuxRoot> newton_puiseux(const SeriesPoly& P, const Rat& precision);

} // namespace berkdyn
