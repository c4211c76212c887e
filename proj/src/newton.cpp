#include "berkdyn/newton.hpp"

#include <optional>

#include "berkdyn/errors.hpp"
#include "berkdyn/polyroot.hpp"

namespace berkdyn {

PuiseuxSeries series_poly_eval(const SeriesPoly& P, const PuiseuxSeries& x) {
    PuiseuxSeries r = PuiseuxSeries::zero(x.mode());
    for (std::size_t i = P.size(); i-- > 0;) r = r * x + P[i];
    return r;
}

SeriesPoly series_poly_derivative(const SeriesPoly& P) {
    SeriesPoly out;
    for (std::size_t i = 1; i < P.size(); ++i)
        out.push_back(P[i].scalar(Coefficient(Rat((long)i))));
    return out;
}

namespace {

enum class CStatus { Zero, Known, Unknown };

struct CPoint {
    int i;
    Rat v; // exact ord (Known) or certified lower bound (Unknown)
    CStatus st;
};

Rat binom(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

/// Taylor shift: coefficients of Q(v) = P(t + v) for a monomial t.
SeriesPoly taylor_shift(const SeriesPoly& P, const PuiseuxSeries& t) {
    std::size_t n = P.size();
    SeriesPoly Q(n);
    // powers of t
    std::vector<PuiseuxSeries> tp(n);
    tp[0] = PuiseuxSeries::constant(Coefficient(Rat(1)));
    if (t.mode() == Mode::Numeric)
        tp[0] = PuiseuxSeries::constant(Coefficient(std::complex<double>(1.0)));
    for (std::size_t k = 1; k < n; ++k) tp[k] = tp[k - 1] * t;
    for (std::size_t k = 0; k < n; ++k) {
        PuiseuxSeries acc = PuiseuxSeries::zero(t.mode());
        for (std::size_t i = k; i < n; ++i)
            acc = acc + P[i].scalar(Coefficient(binom(i, k))) * tp[i - k];
        Q[k] = acc;
    }
    return Q;
}

PuiseuxSeries capped(const PuiseuxSeries& s, const Rat& prec) {
    return s.truncated(ExtRat(prec));
}

struct Solver {
    Rat prec;
    std::vector<PuiseuxRoot> out;
    int steps = 0;

    void solve(const SeriesPoly& P, const std::optional<Rat>& gamma_min,
               const PuiseuxSeries& acc) {
        if (++steps > 5000)
            throw InsufficientPrecision("Newton-Puiseux step budget exhausted");
        int n = (int)P.size() - 1;
        if (n < 1) return;

        std::vector<CStatus> st(n + 1);
        std::vector<Rat> val(n + 1);
        for (int i = 0; i <= n; ++i) {
            const PuiseuxSeries& a = P[i];
            if (a.has_terms()) {
                st[i] = CStatus::Known;
                val[i] = a.ord().finite();
            } else if (a.trunc().is_infinite()) {
                st[i] = CStatus::Zero;
            } else {
                st[i] = CStatus::Unknown;
                val[i] = a.trunc().finite();
            }
        }

        // roots equal to acc exactly: leading identically-zero coefficients
        int i0 = 0;
        while (i0 <= n && st[i0] == CStatus::Zero) ++i0;
        if (i0 > n)
            throw input_error("newton_puiseux: zero polynomial");
        if (i0 > 0) out.push_back({acc, i0});

        std::vector<CPoint> pts;
        for (int i = i0; i <= n; ++i)
            if (st[i] != CStatus::Zero) pts.push_back({i, val[i], st[i]});

        // lower hull (slopes increasing left to right)
        std::vector<CPoint> hull;
        for (const auto& p : pts) {
            while (hull.size() >= 2) {
                const CPoint& o = hull[hull.size() - 2];
                const CPoint& a = hull[hull.size() - 1];
                Rat cross = Rat(a.i - o.i) * (p.v - o.v)
                            - (a.v - o.v) * Rat(p.i - o.i);
                if (cross <= 0)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }

        for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
            const CPoint& L = hull[e];
            const CPoint& R = hull[e + 1];
            Rat gamma = (L.v - R.v) / Rat(R.i - L.i);
            if (gamma_min && !(gamma > *gamma_min)) continue;
            int count = R.i - L.i;

            if (gamma >= prec) {
                // further refinement lies beyond the requested precision
                out.push_back({capped(acc, prec), count});
                continue;
            }

            // certification: no uncertain coefficient may sit on the segment
            bool uncertain = false;
            for (const auto& p : pts) {
                if (p.i < L.i || p.i > R.i) continue;
                Rat line = L.v - Rat(p.i - L.i) * gamma;
                if (p.st == CStatus::Unknown && p.v <= line) uncertain = true;
            }
            if (uncertain)
                throw InsufficientPrecision(
                    "coefficient truncation meets a Newton polygon segment");

            // characteristic polynomial from the on-segment coefficients
            CoeffPoly chi(count + 1);
            Mode mode = P[L.i].mode();
            for (const auto& p : pts) {
                if (p.i < L.i || p.i > R.i || p.st != CStatus::Known) continue;
                Rat line = L.v - Rat(p.i - L.i) * gamma;
                if (p.v == line) chi[p.i - L.i] = P[p.i].coeff_at(line);
            }
            if (mode == Mode::Numeric)
                for (auto& c : chi)
                    if (c.mode() == Mode::Exact) c = Coefficient(c.to_complex());

            for (const auto& [xi, m0] : coeff_poly_roots(chi)) {
                if (xi.is_zero()) continue;
                PuiseuxSeries t = PuiseuxSeries::monomial(xi, gamma);
                solve(taylor_shift(P, t), gamma, acc + t);
            }
        }
    }
};

} // namespace

std::vector<PuiseuxRoot> newton_puiseux(const SeriesPoly& P, const Rat& precision) {
    if (P.size() < 2)
        throw input_error("newton_puiseux requires deg_w >= 1");
    if (P.back().is_identically_zero())
        throw input_error("newton_puiseux: leading coefficient must be nonzero");
    Solver s;
    s.prec = precision;
    s.prec.canonicalize();
    s.solve(P, std::nullopt, PuiseuxSeries::zero(P.back().mode()));
    int total = 0;
    for (const auto& r : s.out) total += r.multiplicity;
    if (total != (int)P.size() - 1)
        throw InsufficientPrecision("root multiplicities do not sum to the degree");
    return s.out;
}

} // namespace berkdyn
