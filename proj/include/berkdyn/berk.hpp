#pragma once

#include <string>
#include <vector>

#include "berkdyn/newton.hpp"
#include "berkdyn/series.hpp"

namespace berkdyn {

enum class FieldView { OverL, OverLaurent };

/**
 * Certified min(ord(a − b), cap): returns the valuation of the difference,
 * clipped at cap. Throws InsufficientPrecision when the truncations cannot
 * decide whether the valuation reaches cap.
 */
Rat ord_of_difference(const PuiseuxSeries& a, const PuiseuxSeries& b,
                      const Rat& cap);

struct SegmentProfile {
    struct Segment {
        Rat start;
        ExtRat end;
        unsigned long m; // constant multiplicity on [start, end)
    };
    std::vector<Segment> segments; // covers [0, t) without gaps
};

/**
 * A point ζ(φ, e^{-t}) of the Berkovich closed unit ball: the sup-seminorm
 * on the closed ball of center φ and radius e^{-t}. t = +∞ gives a type-1
 * (rigid) point, finite rational t a type-2 point; type-3 points (irrational
 * radius) never arise from rational data and are excluded.
 *
 * Canonical form: center terms with exponent ≥ t are dropped. For finite t
 * the canonical center is a complete description, so its truncation is +∞;
 * a rigid point keeps its center's truncation and is "certified" only when
 * that truncation is infinite.
 */
class BerkPoint {
public:
    BerkPoint(const PuiseuxSeries& center, const ExtRat& t,
              FieldView view = FieldView::OverL);

    static BerkPoint gauss() { return BerkPoint(PuiseuxSeries(), ExtRat(0)); }
    static BerkPoint rigid(const PuiseuxSeries& center,
                           FieldView view = FieldView::OverL) {
        return BerkPoint(center, ExtRat::infinity(), view);
    }

    const PuiseuxSeries& center() const { return center_; }
    const ExtRat& t() const { return t_; }
    FieldView view() const { return view_; }

    bool is_rigid() const { return t_.is_infinite(); }
    bool is_type2() const { return !t_.is_infinite(); }
    /// False for rigid points backed by a truncated (uncertified) series.
    bool is_certified() const {
        return !is_rigid() || center_.trunc().is_infinite();
    }

    /// −log|x| where |x| is the seminorm of w: min(ord(center), t).
    ExtRat norm_exponent() const;

    /// A(x) = 1 − log diam(x) = 1 + t.
    ExtRat A() const { return ExtRat(1) + t_; }

    /// Interval decomposition of [0, t) by the running exponent-denominator
    /// lcm of the center: m is 1 on the first interval and only ever grows.
    SegmentProfile approx_sequence() const;

    /// Capacity: Σ (interval length)/m over the profile; +∞ for rigid
    /// Puiseux points, 0 at the Gauss point.
    ExtRat alpha() const;

    /// Number of Galois conjugates: lcm of center exponent denominators
    /// (below t); +∞ for an uncertified rigid point.
    ExtRat multiplicity() const;
    unsigned long multiplicity_finite() const;

    /// b(x) = lcm(m(x), q(A(x))), type-2 points only.
    unsigned long generic_multiplicity() const;

    enum class Order { Less, Greater, Equal, Incomparable };
    /// Tree order: x ≤ y iff the ball of x is contained in the ball of y.
    static Order compare(const BerkPoint& x, const BerkPoint& y);
    /// x ∧ y, the smallest point dominating both.
    static BerkPoint wedge(const BerkPoint& x, const BerkPoint& y);

    friend bool operator==(const BerkPoint& a, const BerkPoint& b) {
        return a.t_ == b.t_ && a.center_ == b.center_;
    }
    friend bool operator!=(const BerkPoint& a, const BerkPoint& b) {
        return !(a == b);
    }

    std::string str() const;

private:
    PuiseuxSeries center_;
    ExtRat t_;
    FieldView view_;
};

/// Parse "zeta(<series>, <t>)" with t rational or "inf".
BerkPoint parse_point(const std::string& text, Mode mode = Mode::Exact);

/**
 * −log|P(x)| for P ∈ 𝕃[w] by the Gauss-lemma product rule: P is factored
 * with newton_puiseux and each linear factor contributes min(ord(center −
 * root), t); the leading coefficient contributes its valuation.
 */
ExtRat neg_log_abs_poly(const SeriesPoly& P, const BerkPoint& x);

} // namespace berkdyn
