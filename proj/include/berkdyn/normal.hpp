#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "berkdyn/skew.hpp"

namespace berkdyn {

/**
 * Formal power series in (z, w) with nonnegative integer exponents,
 * truncated at a total degree: terms of degree < trunc are stored and
 * meaningful, everything above is unknown. All arithmetic keeps the
 * smallest truncation of its operands.
 */
class BivariateSeries {
public:
    using Key = std::pair<long, long>; // (z-degree, w-degree)
    using TermMap = std::map<Key, Coefficient>;

    explicit BivariateSeries(long trunc = 0) : trunc_(trunc) {}

    static BivariateSeries zero(long trunc) { return BivariateSeries(trunc); }
    static BivariateSeries monomial(const Coefficient& c, long i, long j,
                                    long trunc);
    /// The coordinate z (resp. w) as a series.
    static BivariateSeries var_z(long trunc) {
        return monomial(Coefficient(1), 1, 0, trunc);
    }
    static BivariateSeries var_w(long trunc) {
        return monomial(Coefficient(1), 0, 1, trunc);
    }

    const TermMap& terms() const { return terms_; }
    long trunc() const { return trunc_; }
    bool is_zero() const { return terms_.empty(); }
    Coefficient coeff_at(long i, long j) const;
    /// Least total degree of a term; trunc when no terms are stored.
    long ord() const;

    BivariateSeries truncated(long t) const;
    BivariateSeries operator-() const;
    BivariateSeries operator+(const BivariateSeries& o) const;
    BivariateSeries operator-(const BivariateSeries& o) const;
    BivariateSeries operator*(const BivariateSeries& o) const;
    BivariateSeries scalar(const Coefficient& c) const;
    BivariateSeries pow_int(unsigned long e) const;

    /// Substitute z → Z, w → W; both must have ord ≥ 1.
    BivariateSeries substitute(const BivariateSeries& Z,
                               const BivariateSeries& W) const;

    /// (1 + u)^a by the binomial series; requires ord(u) ≥ 1, a rational.
    static BivariateSeries binomial_pow(const BivariateSeries& u, const Rat& a);

    /// Divide by z^k (every term must have z-degree ≥ k).
    BivariateSeries shift_z(long k) const;

    /// The univariate slice along w (all terms with z-degree 0), as a series
    /// in one variable.
    PuiseuxSeries slice_z0() const;
    /// The coefficient of z^m as a univariate series in w.
    PuiseuxSeries z_coefficient(long m) const;

    friend bool operator==(const BivariateSeries& a, const BivariateSeries& b) {
        return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }

    std::string str() const;
    static BivariateSeries parse(const std::string& text, long trunc);

private:
    TermMap terms_;
    long trunc_;
    void insert(long i, long j, const Coefficient& c);
};

/**
 * A superattracting germ f(z, w) = (z^d(1 + ε), w^c + z·h) given by its two
 * components as truncated bivariate series.
 */
struct GermMap {
    BivariateSeries fz, fw;
    long d = 2, c = 2;

    long trunc() const { return fz.trunc(); }
};

/// Φ∘f: substitute the components of f into those of Φ.
GermMap compose(const GermMap& outer, const GermMap& inner);

/**
 * First-component straightening: the unique Φ(z, w) = (z(1 + φ), w) with
 * z∘Φ∘f = (z∘Φ)^d, via 1 + φ = Π_{n≥1} (1 + ε∘f^{n−1})^{d^{−n}}. Returns φ
 * and the conjugated germ, whose first component is exactly z^d.
 */
struct StraightenResult {
    BivariateSeries phi;
    GermMap conjugated;
};
StraightenResult straighten_z(const GermMap& g, long M);

/**
 * One-variable Böttcher coordinate: for p = w^c + O(w^{c+1}) the unique
 * β = w + O(w²) with β∘p ≡ β^c mod w^M, solved coefficient by coefficient.
 */
PuiseuxSeries bottcher_1d(const PuiseuxSeries& p, long M);

/// a∘b for univariate integer-exponent series with ord(b) ≥ 1, mod w^M.
PuiseuxSeries univar_compose(const PuiseuxSeries& a, const PuiseuxSeries& b,
                             long M);
/// Reversion of β = w + O(w²): the γ with β(γ(w)) = w mod w^M.
PuiseuxSeries univar_invert(const PuiseuxSeries& beta, long M);

/// One elementary shear Φ_m(z, w) = (z, w + z^m φ_m(w)) of the induction.
struct ShearStage {
    long m = 1;
    PuiseuxSeries phi_m; // univariate in w, ord ≥ 1
};

struct NormalizeResult {
    std::vector<ShearStage> ledger;
    GermMap conjugated;  // (z^d, w^c + Σ h_j(z) w^j) mod total degree M
    SkewMap normal_form{2, 2, {}, false}; // the extracted truncated product
};

/**
 * Formal normal-form induction: assumes the first component is z^d and the
 * restriction to {z = 0} is w^c, then eliminates the w-degree ≥ c part of
 * every z^m-coefficient (m < M) by the shear Φ_m with
 * φ_m = g_m^+ / (c w^{c−1}). Stage m never changes total degrees < m.
 */
NormalizeResult normalize(const GermMap& g, long M);

/// Compose the ledger into a single germ Ψ with Ψ∘f = f̃∘Ψ.
GermMap ledger_to_germ(const std::vector<ShearStage>& ledger, long d, long c,
                       long trunc);

/// straighten_z, Böttcher on the restriction, then normalize.
NormalizeResult full_normalize(const GermMap& g, long M);

} // namespace berkdyn
