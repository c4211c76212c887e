#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "berkdyn/berk.hpp"

using namespace berkdyn;

namespace {

PuiseuxSeries mono(long num, long den, long cnum, long cden = 1) {
    return PuiseuxSeries::monomial(Coefficient(rat(cnum, cden)), rat(num, den));
}

} // namespace

TEST_CASE("gauss point basics") {
    BerkPoint g = BerkPoint::gauss();
    CHECK(g.t() == ExtRat(0));
    CHECK(g.is_type2());
    CHECK(g.norm_exponent() == ExtRat(0));
    CHECK(g.A() == ExtRat(1));
    CHECK(g.alpha() == ExtRat(0));
    CHECK(g.multiplicity() == ExtRat(1));
    CHECK(g.generic_multiplicity() == 1);
    CHECK(g.approx_sequence().segments.empty());
    CHECK(g.str() == "zeta(0, 0)");
}

TEST_CASE("canonical centers drop terms at and above t") {
    BerkPoint x(mono(2, 1, 1) + mono(6, 1, 1), ExtRat(rat(2)));
    CHECK(x.center().terms().empty()); // z^2 itself sits at the radius
    CHECK(x.center().trunc().is_infinite());
    CHECK(x == BerkPoint(PuiseuxSeries::zero(), ExtRat(rat(2))));

    BerkPoint y(mono(2, 1, 1) + mono(6, 1, 1), ExtRat(rat(3)));
    CHECK(y.center() == mono(2, 1, 1));
    CHECK(y.center().trunc().is_infinite());
    CHECK(y.is_certified());

    // a center only known to O(z^2) cannot define a point at t = 3
    CHECK_THROWS_AS(
        BerkPoint(mono(1, 1, 1).truncated(ExtRat(rat(2))), ExtRat(rat(3))),
        InsufficientPrecision);
    // centers outside the unit ball are rejected
    CHECK_THROWS_AS(BerkPoint(mono(-1, 1, 1), ExtRat(rat(1))), input_error);
    CHECK_THROWS_AS(BerkPoint(PuiseuxSeries::zero(), ExtRat(rat(-1))),
                    input_error);
}

TEST_CASE("norm exponent") {
    CHECK(BerkPoint(mono(3, 1, 1), ExtRat(rat(2))).norm_exponent()
          == ExtRat(rat(2)));
    CHECK(BerkPoint(mono(1, 1, 1), ExtRat(rat(2))).norm_exponent()
          == ExtRat(rat(1)));
    CHECK(BerkPoint::rigid(mono(3, 1, 1)).norm_exponent() == ExtRat(rat(3)));
    CHECK(BerkPoint::rigid(PuiseuxSeries::zero()).norm_exponent().is_infinite());
    BerkPoint u = BerkPoint::rigid(PuiseuxSeries::unknown(ExtRat(rat(5))));
    CHECK(!u.is_certified());
    CHECK_THROWS_AS(u.norm_exponent(), IndeterminateOrder);
}

TEST_CASE("approximation profile, capacity, multiplicity") {
    // center z^(3/2), t = 2: m jumps from 1 to 2 at 3/2
    BerkPoint x(mono(3, 2, 1), ExtRat(rat(2)));
    auto prof = x.approx_sequence();
    REQUIRE(prof.segments.size() == 2);
    CHECK(prof.segments[0].start == 0);
    CHECK(prof.segments[0].end == ExtRat(rat(3, 2)));
    CHECK(prof.segments[0].m == 1);
    CHECK(prof.segments[1].start == rat(3, 2));
    CHECK(prof.segments[1].end == ExtRat(rat(2)));
    CHECK(prof.segments[1].m == 2);
    CHECK(x.alpha() == ExtRat(rat(7, 4))); // 3/2 + (1/2)/2
    CHECK(x.multiplicity() == ExtRat(2));
    CHECK(x.generic_multiplicity() == 2); // lcm(2, q(3)) = 2

    BerkPoint y(mono(2, 1, 1), ExtRat(rat(2)));
    CHECK(y.alpha() == ExtRat(rat(2)));
    CHECK(y.multiplicity() == ExtRat(1));

    // q(A) contributes: t = 3/2 gives A = 5/2
    BerkPoint h(PuiseuxSeries::zero(), ExtRat(rat(3, 2)));
    CHECK(h.generic_multiplicity() == 2);

    // rigid certified Puiseux center: finite multiplicity, infinite capacity
    BerkPoint r = BerkPoint::rigid(mono(1, 2, 1));
    CHECK(r.multiplicity() == ExtRat(2));
    CHECK(r.alpha().is_infinite());
    CHECK_THROWS_AS(r.generic_multiplicity(), NotType2);

    // uncertified rigid point has infinite multiplicity
    BerkPoint u = BerkPoint::rigid(mono(1, 1, 1).truncated(ExtRat(rat(9))));
    CHECK(u.multiplicity().is_infinite());
    CHECK_THROWS_AS(u.multiplicity_finite(), input_error);
}

TEST_CASE("certified order of difference") {
    PuiseuxSeries a = mono(1, 1, 1).truncated(ExtRat(rat(3)));
    PuiseuxSeries b = mono(1, 1, 1);
    CHECK(ord_of_difference(a, b, rat(2)) == rat(2));
    CHECK(ord_of_difference(a, b, rat(3)) == rat(3));
    CHECK_THROWS_AS(ord_of_difference(a, b, rat(4)), InsufficientPrecision);
    CHECK(ord_of_difference(mono(2, 1, 1), mono(2, 1, -1), rat(10)) == rat(2));
    CHECK(ord_of_difference(b, b, rat(10)) == rat(10));
}

TEST_CASE("tree order and wedge") {
    BerkPoint top(PuiseuxSeries::zero(), ExtRat(rat(1)));
    BerkPoint mid(mono(2, 1, 1), ExtRat(rat(3)));
    BerkPoint leaf = BerkPoint::rigid(mono(2, 1, 1) + mono(4, 1, 1));
    using O = BerkPoint::Order;
    CHECK(BerkPoint::compare(mid, top) == O::Less);
    CHECK(BerkPoint::compare(top, mid) == O::Greater);
    CHECK(BerkPoint::compare(leaf, mid) == O::Less);
    CHECK(BerkPoint::compare(top, top) == O::Equal);

    BerkPoint sib(mono(2, 1, -1), ExtRat(rat(3)));
    CHECK(BerkPoint::compare(mid, sib) == O::Incomparable);
    CHECK(BerkPoint::wedge(mid, sib) == BerkPoint(mono(2, 1, 1), ExtRat(rat(2))));
    CHECK(BerkPoint::wedge(mid, top) == top);
    CHECK(BerkPoint::wedge(leaf, leaf) == leaf);

    // two rigid points meet at the valuation of their difference
    BerkPoint r2 = BerkPoint::rigid(mono(2, 1, 1) + mono(5, 1, 1));
    CHECK(BerkPoint::wedge(leaf, r2)
          == BerkPoint(mono(2, 1, 1), ExtRat(rat(4))));
}

TEST_CASE("galois-orbit representative over the coefficient-closed field") {
    BerkPoint a(mono(1, 2, 1), ExtRat(rat(1)), FieldView::OverLaurent);
    BerkPoint b(mono(1, 2, -1), ExtRat(rat(1)), FieldView::OverLaurent);
    CHECK(a == b);
    CHECK(a.center() == mono(1, 2, -1)); // lexicographically least conjugate
    BerkPoint c(mono(1, 2, 1), ExtRat(rat(1)));
    CHECK(c.center() == mono(1, 2, 1)); // over L itself, nothing is identified
}

TEST_CASE("point parsing and printing") {
    BerkPoint x = parse_point("zeta(z^2 + 1/2*z^6, 7)");
    CHECK(x.t() == ExtRat(rat(7)));
    CHECK(x.center() == mono(2, 1, 1) + mono(6, 1, 1, 2));
    CHECK(parse_point(x.str()) == x);

    BerkPoint r = parse_point("zeta(2*z^(1/5), inf)");
    CHECK(r.is_rigid());
    CHECK(r.center() == mono(1, 5, 2));
    CHECK(r.str() == "zeta(2*z^(1/5), inf)");
    CHECK(parse_point("zeta(0, 0)") == BerkPoint::gauss());
    CHECK_THROWS_AS(parse_point("ball(0, 0)"), ParseError);
    CHECK_THROWS_AS(parse_point("zeta(0, x)"), ParseError);
}

TEST_CASE("minus log of a polynomial seminorm") {
    PuiseuxSeries z = mono(1, 1, 1);
    SeriesPoly P = {-z.pow(4), PuiseuxSeries::zero(),
                    PuiseuxSeries::constant(Coefficient(rat(1)))}; // w^2 - z^4
    CHECK(neg_log_abs_poly(P, BerkPoint::gauss()) == ExtRat(0));
    CHECK(neg_log_abs_poly(P, BerkPoint(PuiseuxSeries::zero(), ExtRat(rat(3))))
          == ExtRat(4)); // both roots at distance 2 < 3
    CHECK(neg_log_abs_poly(P, BerkPoint(mono(2, 1, 1), ExtRat(rat(5))))
          == ExtRat(7)); // ord 5 to +z^2, ord 2 to -z^2
    CHECK(neg_log_abs_poly(P, BerkPoint::rigid(mono(2, 1, 1))).is_infinite());

    // leading coefficient valuation enters additively: z^3 * (w - z)
    SeriesPoly Q = {-z.pow(4), z.pow(3)};
    CHECK(neg_log_abs_poly(Q, BerkPoint::gauss()) == ExtRat(3));
    CHECK(neg_log_abs_poly(Q, BerkPoint(PuiseuxSeries::zero(), ExtRat(rat(2))))
          == ExtRat(4)); // 3 + min(1, 2)
}
