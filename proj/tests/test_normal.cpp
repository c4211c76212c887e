#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "berkdyn/normal.hpp"

using namespace berkdyn;

namespace {

BivariateSeries bmono(long cnum, long cden, long i, long j, long M) {
    return BivariateSeries::monomial(Coefficient(rat(cnum, cden)), i, j, M);
}

PuiseuxSeries wmono(long e, long cnum, long cden = 1) {
    return PuiseuxSeries::monomial(Coefficient(rat(cnum, cden)), rat(e));
}

} // namespace

TEST_CASE("bivariate arithmetic and text form") {
    long M = 8;
    BivariateSeries a = bmono(1, 1, 1, 0, M) + bmono(1, 2, 0, 2, M);
    BivariateSeries b = a * a;
    CHECK(b.coeff_at(2, 0) == Coefficient(1));
    CHECK(b.coeff_at(1, 2) == Coefficient(1));
    CHECK(b.coeff_at(0, 4) == Coefficient(rat(1, 4)));
    CHECK(b.ord() == 2);

    CHECK(a.str() == "1*z^1 + 1/2*w^2");
    CHECK(BivariateSeries::parse(a.str(), M) == a);
    CHECK(BivariateSeries::parse("0", M).is_zero());
    CHECK(BivariateSeries::parse("-1*z^4*w^0", M) == bmono(-1, 1, 4, 0, M));

    // truncation absorbs high-degree products
    BivariateSeries big = bmono(1, 1, 4, 0, M) * bmono(1, 1, 4, 0, M);
    CHECK(big.is_zero());

    // substitution: (z + w²/2)(z → zw, w → z) = zw + z²/2
    BivariateSeries sub = a.substitute(bmono(1, 1, 1, 1, M), bmono(1, 1, 1, 0, M));
    CHECK(sub.coeff_at(1, 1) == Coefficient(1));
    CHECK(sub.coeff_at(2, 0) == Coefficient(rat(1, 2)));

    // binomial series: (1 + z)^{1/2}
    BivariateSeries half =
        BivariateSeries::binomial_pow(bmono(1, 1, 1, 0, M), rat(1, 2));
    CHECK(half.coeff_at(0, 0) == Coefficient(1));
    CHECK(half.coeff_at(1, 0) == Coefficient(rat(1, 2)));
    CHECK(half.coeff_at(2, 0) == Coefficient(rat(-1, 8)));
    CHECK(half.coeff_at(3, 0) == Coefficient(rat(1, 16)));
}

TEST_CASE("first-component straightening") {
    long M = 5;
    // trivial: already of the form z^d
    GermMap triv{bmono(1, 1, 2, 0, M + 2), bmono(1, 1, 0, 2, M + 2), 2, 2};
    StraightenResult st0 = straighten_z(triv, M);
    CHECK(st0.phi.is_zero());

    // f = (z²(1+z), w²): φ = z/2 + z²/8 + O(z³)
    GermMap g{bmono(1, 1, 2, 0, M + 2) + bmono(1, 1, 3, 0, M + 2),
              bmono(1, 1, 0, 2, M + 2), 2, 2};
    StraightenResult st = straighten_z(g, M);
    CHECK(st.phi.coeff_at(1, 0) == Coefficient(rat(1, 2)));
    CHECK(st.phi.coeff_at(2, 0) == Coefficient(rat(1, 8)));

    // conjugated first component is exactly z² below the truncation
    BivariateSeries diff =
        st.conjugated.fz - bmono(1, 1, 2, 0, st.conjugated.fz.trunc());
    CHECK(diff.is_zero());

    // defining identity z∘Φ∘f = (z∘Φ)^d and its rigidity under perturbation
    long T = M + 2;
    BivariateSeries one = bmono(1, 1, 0, 0, T);
    BivariateSeries z1 = BivariateSeries::var_z(T);
    auto check_identity = [&](const BivariateSeries& phi) {
        BivariateSeries lhs =
            g.fz * (one + phi.substitute(g.fz, g.fw));
        BivariateSeries rhs = (z1 * (one + phi)).pow_int(2);
        return (lhs - rhs).truncated(T).is_zero();
    };
    BivariateSeries full_phi = st.phi; // order-M data suffices at trunc M + d
    CHECK(check_identity(straighten_z(g, M + 2).phi));
    CHECK(!check_identity(full_phi + bmono(1, 1, 1, 0, T)));
}

TEST_CASE("one-variable Boettcher coordinate") {
    long M = 9;
    PuiseuxSeries pure = wmono(3, 1);
    CHECK(bottcher_1d(pure, M) == wmono(1, 1));

    PuiseuxSeries p = wmono(2, 1) + wmono(3, 1);
    PuiseuxSeries beta = bottcher_1d(p, M);
    CHECK(beta.coeff_at(rat(1)) == Coefficient(1));
    CHECK(beta.coeff_at(rat(2)) == Coefficient(rat(1, 2)));
    CHECK(beta.coeff_at(rat(3)) == Coefficient(rat(1, 8)));

    // defining property: β∘p = β² mod w^M
    PuiseuxSeries residual =
        univar_compose(beta, p, M) - beta.pow(2).truncated(ExtRat(rat(M)));
    CHECK(!residual.has_terms());

    // conjugation form: β∘p∘β^{-1} = w² mod w^M
    PuiseuxSeries gamma = univar_invert(beta, M);
    PuiseuxSeries conj =
        univar_compose(univar_compose(beta, p, M), gamma, M);
    PuiseuxSeries conj_residual = conj - wmono(2, 1).truncated(ExtRat(rat(M)));
    CHECK(!conj_residual.has_terms());

    CHECK_THROWS_AS(bottcher_1d(wmono(2, 2), M), input_error); // leading 2w²
    CHECK_THROWS_AS(bottcher_1d(wmono(1, 1), M), input_error); // order 1
}

TEST_CASE("normal-form induction") {
    long M = 6;
    // f = (z², w² + zw²): one stage with Φ₁ = (z, w + zw/2)
    GermMap g{bmono(1, 1, 2, 0, M),
              bmono(1, 1, 0, 2, M) + bmono(1, 1, 1, 2, M), 2, 2};
    NormalizeResult res = normalize(g, M);
    REQUIRE(!res.ledger.empty());
    CHECK(res.ledger[0].m == 1);
    CHECK(res.ledger[0].phi_m == wmono(1, 1, 2)); // w/2
    CHECK(!res.conjugated.fw.z_coefficient(1).has_terms());

    // master conjugacy identity Ψ∘f = f̃∘Ψ mod total degree M
    GermMap psi = ledger_to_germ(res.ledger, 2, 2, M);
    GermMap lhs = compose(psi, g);
    GermMap rhs = compose(res.conjugated, psi);
    CHECK((lhs.fz - rhs.fz).is_zero());
    CHECK((lhs.fw - rhs.fw).is_zero());

    // normal form: h_j(0) = 0, w-degrees ≤ c − 1
    for (const auto& hj : res.normal_form.h())
        if (hj.has_terms()) CHECK(hj.ord() > ExtRat(0));

    // already-normal input: identity ledger
    GermMap already{bmono(1, 1, 4, 0, M),
                    bmono(1, 1, 0, 2, M) + bmono(-1, 1, 4, 0, M), 4, 2};
    CHECK(normalize(already, M).ledger.empty());
}

TEST_CASE("full pipeline on a perturbed quadratic skew product") {
    long M = 8;
    // f = (z⁴, w² − z⁴ + z·w³)
    GermMap g{bmono(1, 1, 4, 0, M),
              bmono(1, 1, 0, 2, M) + bmono(-1, 1, 4, 0, M)
                  + bmono(1, 1, 1, 3, M),
              4, 2};
    NormalizeResult res = normalize(g, M);
    REQUIRE(!res.ledger.empty());
    CHECK(res.ledger[0].m == 1);
    CHECK(res.ledger[0].phi_m == wmono(2, 1, 2)); // w³/(2w) = w²/2

    const auto& h = res.normal_form.h();
    REQUIRE(h.size() == 2);
    CHECK(h[0].coeff_at(rat(4)) == Coefficient(-1));
    CHECK(h[0].has_terms());
    for (const auto& hj : h)
        if (hj.has_terms()) CHECK(hj.ord() > ExtRat(0));

    GermMap psi = ledger_to_germ(res.ledger, 4, 2, M);
    GermMap lhs = compose(psi, g);
    GermMap rhs = compose(res.conjugated, psi);
    CHECK((lhs.fz - rhs.fz).is_zero());
    CHECK((lhs.fw - rhs.fw).is_zero());

    // stage m never modifies total degrees < m: the normal form agrees with
    // the input on the unperturbed part
    CHECK(res.conjugated.fw.coeff_at(0, 2) == Coefficient(1));
    CHECK(res.conjugated.fw.coeff_at(4, 0) == Coefficient(-1));
}

TEST_CASE("full normalize runs straightening and Boettcher first") {
    long M = 6;
    // f = (z²(1+z), w² + w³ + zw)
    GermMap g{bmono(1, 1, 2, 0, M) + bmono(1, 1, 3, 0, M),
              bmono(1, 1, 0, 2, M) + bmono(1, 1, 0, 3, M)
                  + bmono(1, 1, 1, 1, M),
              2, 2};
    NormalizeResult res = full_normalize(g, M);
    BivariateSeries z2 = bmono(1, 1, 2, 0, res.conjugated.fz.trunc());
    CHECK((res.conjugated.fz - z2).is_zero());
    CHECK(res.conjugated.fw.slice_z0()
          == wmono(2, 1)); // restriction is exactly w²
    for (const auto& [key, coeff] : res.conjugated.fw.terms()) {
        bool leading = key.first == 0 && key.second == 2;
        if (!leading) CHECK(key.second <= 1);
    }
}
