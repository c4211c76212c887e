#pragma once

#include <map>
#include <string>
#include <vector>

#include "berkdyn/coeff.hpp"
#include "berkdyn/rational.hpp"

namespace berkdyn {

/**
 * Truncated Puiseux series Σ a_β z^β with exact rational exponents.
 *
 * The series is known modulo z^trunc ("known modulo z^T" discipline):
 * every stored exponent is strictly below trunc and every stored coefficient
 * is nonzero. trunc = +∞ means the series is represented exactly.
 * Values are immutable after construction; all operations return new series
 * with the tightest provable truncation.
 */
class PuiseuxSeries {
public:
    using TermMap = std::map<Rat, Coefficient>;

    /// The zero series, represented exactly.
    PuiseuxSeries() : trunc_(ExtRat::infinity()), mode_(Mode::Exact) {}

    PuiseuxSeries(TermMap terms, ExtRat trunc, Mode mode = Mode::Exact);

    static PuiseuxSeries zero(Mode mode = Mode::Exact) {
        PuiseuxSeries s;
        s.mode_ = mode;
        return s;
    }
    /// O(z^T): no known terms, truncation T.
    static PuiseuxSeries unknown(const ExtRat& trunc, Mode mode = Mode::Exact) {
        PuiseuxSeries s;
        s.trunc_ = trunc;
        s.mode_ = mode;
        return s;
    }
    static PuiseuxSeries monomial(const Coefficient& c, const Rat& exp);
    static PuiseuxSeries constant(const Coefficient& c) {
        return monomial(c, Rat(0));
    }

    const TermMap& terms() const { return terms_; }
    const ExtRat& trunc() const { return trunc_; }
    Mode mode() const { return mode_; }

    /// lcm of the denominators of stored exponents (1 for no terms).
    unsigned long ram() const;

    bool has_terms() const { return !terms_.empty(); }
    /// True exactly for the exact zero series.
    bool is_identically_zero() const {
        return terms_.empty() && trunc_.is_infinite();
    }

    /// z-adic valuation; +∞ for the exact zero series.
    /// Throws IndeterminateOrder when no term is known and trunc is finite.
    ExtRat ord() const;
    /// Certified lower bound for ord: least stored exponent, else trunc.
    ExtRat ord_lb() const;

    Coefficient leading() const;
    Coefficient coeff_at(const Rat& exp) const;

    /// Forget knowledge at and above T.
    PuiseuxSeries truncated(const ExtRat& T) const;

    PuiseuxSeries operator-() const;
    PuiseuxSeries operator+(const PuiseuxSeries& o) const;
    PuiseuxSeries operator-(const PuiseuxSeries& o) const;
    PuiseuxSeries operator*(const PuiseuxSeries& o) const;
    PuiseuxSeries scalar(const Coefficient& c) const;
    PuiseuxSeries pow(unsigned long e) const;
    /// Multiply by the monomial z^e.
    PuiseuxSeries shift(const Rat& e) const;

    /// Multiplicative inverse, correct modulo z^prec (and no further than the
    /// input's own knowledge allows). Requires a determinate leading term.
    PuiseuxSeries inverse(const Rat& prec) const;
    PuiseuxSeries div(const PuiseuxSeries& o, const Rat& prec) const;

    /// z ↦ z^{1/k}: exponents and truncation scale by 1/k.
    PuiseuxSeries ramify(unsigned long k) const;
    /// z ↦ z^k, the base change; inverse of ramify on its image.
    PuiseuxSeries unramify(unsigned long k) const;

    /// The m Galois conjugates (m = lcm of exponent denominators), in the
    /// canonical order ζ = ζ_m^0, ζ_m^1, …; exact mode supports m ∈ {1,2,4}.
    std::vector<PuiseuxSeries> galois_conjugates() const;

    /// Canonical equality: equal term maps and equal truncation.
    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return !(a == b);
    }

    /// Deterministic total order on canonical forms (term-lexicographic).
    friend bool lex_less(const PuiseuxSeries& a, const PuiseuxSeries& b);

    std::string str() const;

private:
    TermMap terms_;
    ExtRat trunc_;
    Mode mode_;
};

/// Parse the canonical text format (see str()). Throws ParseError.
PuiseuxSeries parse_series(const std::string& text, Mode mode = Mode::Exact);

} // namespace berkdyn
