#include "berkdyn/berk.hpp"

#include <algorithm>

#include "berkdyn/errors.hpp"

namespace berkdyn {

Rat ord_of_difference(const PuiseuxSeries& a, const PuiseuxSeries& b,
                      const Rat& cap) {
    PuiseuxSeries diff = a - b;
    if (diff.has_terms()) {
        Rat o = diff.ord().finite();
        return o < cap ? o : cap;
    }
    if (diff.trunc() >= ExtRat(cap)) return cap;
    throw InsufficientPrecision(
        "difference is O(z^" + diff.trunc().str() + "), need certainty to z^"
        + rat_to_string(cap));
}

BerkPoint::BerkPoint(const PuiseuxSeries& center, const ExtRat& t,
                     FieldView view)
    : t_(t), view_(view) {
    if (t_ < ExtRat(0)) throw input_error("radius exponent must be >= 0");
    if (!t_.is_infinite() && center.trunc() < t_)
        throw InsufficientPrecision("center known to O(z^" + center.trunc().str()
                                    + ") cannot pin a point at t = " + t_.str());
    if (t_.is_infinite()) {
        center_ = center;
    } else {
        // canonical form: the center matters only below t, and below t it is
        // completely known, so the canonical center is exact
        PuiseuxSeries::TermMap kept;
        for (const auto& [e, c] : center.terms())
            if (ExtRat(e) < t_) kept.emplace(e, c);
        center_ = PuiseuxSeries(std::move(kept), ExtRat::infinity(), center.mode());
    }
    if (center_.has_terms() && center_.ord_lb() < ExtRat(0))
        throw input_error("center lies outside the closed unit ball");
    if (view_ == FieldView::OverLaurent && center_.mode() == Mode::Exact) {
        try {
            auto conj = center_.galois_conjugates();
            center_ = *std::min_element(
                conj.begin(), conj.end(),
                [](const PuiseuxSeries& a, const PuiseuxSeries& b) {
                    return lex_less(a, b);
                });
        } catch (const RootsOfUnityUnavailable&) {
            // representative left as given; equality tests stay sound but may
            // distinguish conjugates whose roots of unity are unavailable
        }
    }
}

ExtRat BerkPoint::norm_exponent() const {
    if (center_.has_terms()) return min(center_.ord(), t_);
    if (t_ <= center_.trunc()) return t_;
    throw IndeterminateOrder();
}

SegmentProfile BerkPoint::approx_sequence() const {
    SegmentProfile out;
    unsigned long m = 1;
    Rat start(0);
    for (const auto& [e, c] : center_.terms()) {
        if (e <= 0) continue;
        unsigned long nm = lcm_ul(m, denominator_of(e));
        if (nm != m) {
            if (Rat(e) > start)
                out.segments.push_back({start, ExtRat(e), m});
            m = nm;
            start = e;
        }
    }
    if (t_ > ExtRat(start)) out.segments.push_back({start, t_, m});
    return out;
}

ExtRat BerkPoint::alpha() const {
    auto prof = approx_sequence();
    ExtRat total(0);
    for (const auto& seg : prof.segments) {
        ExtRat end = min(seg.end, t_);
        if (end.is_infinite()) return ExtRat::infinity();
        total = total + ExtRat((end.finite() - seg.start) / Rat((long)seg.m));
    }
    return total;
}

ExtRat BerkPoint::multiplicity() const {
    if (is_rigid() && !is_certified()) return ExtRat::infinity();
    unsigned long m = 1;
    for (const auto& [e, c] : center_.terms()) m = lcm_ul(m, denominator_of(e));
    return ExtRat((long)m);
}

unsigned long BerkPoint::multiplicity_finite() const {
    ExtRat m = multiplicity();
    if (m.is_infinite())
        throw input_error("point has infinite multiplicity (uncertified center)");
    return (unsigned long)floor_long(m.finite());
}

unsigned long BerkPoint::generic_multiplicity() const {
    if (!is_type2()) throw NotType2();
    unsigned long qa = denominator_of(Rat(1) + t_.finite());
    return lcm_ul(multiplicity_finite(), qa);
}

namespace {

/// Is x ≤ y in the tree order (ball of x contained in ball of y)?
bool point_leq(const BerkPoint& x, const BerkPoint& y) {
    if (x.t() < y.t()) return false;
    if (y.t().is_infinite()) return x == y;
    Rat ty = y.t().finite();
    return ord_of_difference(x.center(), y.center(), ty) >= ty;
}

} // namespace

BerkPoint::Order BerkPoint::compare(const BerkPoint& x, const BerkPoint& y) {
    if (x == y) return Order::Equal;
    if (point_leq(x, y)) return Order::Less;
    if (point_leq(y, x)) return Order::Greater;
    return Order::Incomparable;
}

BerkPoint BerkPoint::wedge(const BerkPoint& x, const BerkPoint& y) {
    ExtRat cap = min(x.t(), y.t());
    if (cap.is_infinite()) {
        // two rigid points: the wedge sits at the valuation of the difference
        PuiseuxSeries diff = x.center() - y.center();
        if (!diff.has_terms() && diff.trunc().is_infinite())
            return x; // equal rigid points
        if (!diff.has_terms())
            throw InsufficientPrecision("wedge of indistinguishable rigid points");
        return BerkPoint(x.center(), diff.ord(), x.view());
    }
    Rat o = ord_of_difference(x.center(), y.center(), cap.finite());
    return BerkPoint(x.t() <= y.t() ? x.center() : y.center(),
                     min(cap, ExtRat(o)), x.view());
}

std::string BerkPoint::str() const {
    return "zeta(" + center_.str() + ", " + t_.str() + ")";
}

BerkPoint parse_point(const std::string& text, Mode mode) {
    auto open = text.find('(');
    if (text.substr(0, open) != "zeta" || open == std::string::npos
        || text.back() != ')')
        throw ParseError("expected zeta(<series>, <t>)", 0);
    std::string body = text.substr(open + 1, text.size() - open - 2);
    auto comma = body.rfind(',');
    if (comma == std::string::npos)
        throw ParseError("expected ',' in zeta(...)", open);
    std::string ts = body.substr(comma + 1);
    while (!ts.empty() && ts.front() == ' ') ts.erase(0, 1);
    ExtRat t;
    if (ts == "inf") {
        t = ExtRat::infinity();
    } else {
        auto r = rat_from_string(ts);
        if (!r) throw ParseError("malformed radius exponent '" + ts + "'", comma);
        t = ExtRat(*r);
    }
    return BerkPoint(parse_series(body.substr(0, comma), mode), t);
}

ExtRat neg_log_abs_poly(const SeriesPoly& P, const BerkPoint& x) {
    if (P.empty()) throw input_error("empty polynomial");
    ExtRat total = P.back().ord();
    if (P.size() == 1) return total;
    Rat prec = x.t().is_infinite() ? Rat(60) : x.t().finite() + 2;
    for (const auto& [root, mult] : newton_puiseux(P, prec)) {
        PuiseuxSeries diff = x.center() - root;
        ExtRat o = diff.is_identically_zero()
                       ? ExtRat::infinity()
                       : ExtRat(ord_of_difference(x.center(), root, prec));
        total = total + min(o, x.t()) * Rat(mult);
    }
    return total;
}

} // namespace berkdyn
