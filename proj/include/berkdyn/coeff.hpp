#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "berkdyn/rational.hpp"

namespace berkdyn {

enum class Mode { Exact, Numeric };

/// Exact square root of a nonnegative rational, if one exists in ℚ.
inline std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    Rat c = r;
    c.canonicalize();
    if (!mpz_perfect_square_p(c.get_num().get_mpz_t())) return std::nullopt;
    if (!mpz_perfect_square_p(c.get_den().get_mpz_t())) return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), c.get_den().get_mpz_t());
    Rat out(n, d);
    out.canonicalize();
    return out;
}

/**
 * Coefficient of a Puiseux series: an exact Gaussian rational a + b·i, or a
 * complex double in numeric mode. Exact-mode arithmetic is bit-reproducible;
 * the numeric mode is quarantined behind the mode tag and uses a tolerance
 * for zero tests. Mixing modes in one operation is an error.
 */
class Coefficient {
public:
    static constexpr double numeric_zero_eps = 1e-12;

    Coefficient() : mode_(Mode::Exact), re_(0), im_(0), num_(0.0) {}
    Coefficient(const Rat& re, const Rat& im = Rat(0))
        : mode_(Mode::Exact), re_(re), im_(im), num_(0.0) {}
    Coefficient(long v) : Coefficient(Rat(v)) {}
    explicit Coefficient(std::complex<double> v)
        : mode_(Mode::Numeric), re_(0), im_(0), num_(v) {}

    static Coefficient i() { return Coefficient(Rat(0), Rat(1)); }

    Mode mode() const { return mode_; }
    const Rat& re() const { require_exact(); return re_; }
    const Rat& im() const { require_exact(); return im_; }

    bool is_zero() const {
        if (mode_ == Mode::Exact) return re_ == 0 && im_ == 0;
        return std::abs(num_) < numeric_zero_eps;
    }
    bool is_real() const {
        if (mode_ == Mode::Exact) return im_ == 0;
        return std::abs(num_.imag()) < numeric_zero_eps;
    }
    bool is_one() const {
        if (mode_ == Mode::Exact) return re_ == 1 && im_ == 0;
        return std::abs(num_ - 1.0) < numeric_zero_eps;
    }

    std::complex<double> to_complex() const {
        if (mode_ == Mode::Numeric) return num_;
        return {re_.get_d(), im_.get_d()};
    }

    Coefficient operator-() const {
        if (mode_ == Mode::Exact) return Coefficient(-re_, -im_);
        return Coefficient(-num_);
    }
    Coefficient operator+(const Coefficient& o) const {
        check_modes(o);
        if (mode_ == Mode::Exact) return Coefficient(re_ + o.re_, im_ + o.im_);
        return Coefficient(num_ + o.num_);
    }
    Coefficient operator-(const Coefficient& o) const { return *this + (-o); }
    Coefficient operator*(const Coefficient& o) const {
        check_modes(o);
        if (mode_ == Mode::Exact)
            return Coefficient(re_ * o.re_ - im_ * o.im_,
                               re_ * o.im_ + im_ * o.re_);
        return Coefficient(num_ * o.num_);
    }
    Coefficient operator/(const Coefficient& o) const {
        check_modes(o);
        if (mode_ == Mode::Numeric) return Coefficient(num_ / o.num_);
        if (o.is_zero()) throw input_error("division by zero coefficient");
        Rat n = o.re_ * o.re_ + o.im_ * o.im_;
        return Coefficient((re_ * o.re_ + im_ * o.im_) / n,
                           (im_ * o.re_ - re_ * o.im_) / n);
    }

    Coefficient pow(unsigned long e) const {
        Coefficient acc(Rat(1));
        if (mode_ == Mode::Numeric) acc = Coefficient(std::complex<double>(1.0));
        Coefficient base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    Coefficient conj() const {
        if (mode_ == Mode::Exact) return Coefficient(re_, -im_);
        return Coefficient(std::conj(num_));
    }

    /// Exact square root in ℚ(i), when one exists.
    std::optional<Coefficient> sqrt_exact() const {
        require_exact();
        if (im_ == 0) {
            if (auto s = rational_sqrt(re_)) return Coefficient(*s);
            if (auto s = rational_sqrt(-re_)) return Coefficient(Rat(0), *s);
            return std::nullopt;
        }
        auto r = rational_sqrt(re_ * re_ + im_ * im_);
        if (!r) return std::nullopt;
        auto x = rational_sqrt((re_ + *r) / 2);
        if (!x || *x == 0) return std::nullopt;
        Rat y = im_ / (2 * (*x));
        Coefficient cand(*x, y);
        if (cand * cand == *this) return cand;
        return std::nullopt;
    }

    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        if (a.mode_ != b.mode_) return false;
        if (a.mode_ == Mode::Exact) return a.re_ == b.re_ && a.im_ == b.im_;
        return std::abs(a.num_ - b.num_) < numeric_zero_eps;
    }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) {
        return !(a == b);
    }

    /// Deterministic total order (lexicographic on real then imaginary part),
    /// used for canonical enumeration of roots and Galois representatives.
    friend bool lex_less(const Coefficient& a, const Coefficient& b) {
        if (a.mode_ == Mode::Exact && b.mode_ == Mode::Exact) {
            int c = cmp(a.re_, b.re_);
            if (c != 0) return c < 0;
            return cmp(a.im_, b.im_) < 0;
        }
        auto x = a.to_complex(), y = b.to_complex();
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    }

    std::string str() const;

private:
    void require_exact() const {
        if (mode_ != Mode::Exact)
            throw input_error("operation requires an exact-mode coefficient");
    }
    void check_modes(const Coefficient& o) const {
        if (mode_ != o.mode_)
            throw input_error("mixing exact and numeric coefficients");
    }

    Mode mode_;
    Rat re_, im_;
    std::complex<double> num_;
};

/// ζ_4^k for k mod 4: the units of ℚ(i).
inline Coefficient fourth_root_of_unity(unsigned long k) {
    switch (k % 4) {
        case 0: return Coefficient(Rat(1));
        case 1: return Coefficient::i();
        case 2: return Coefficient(Rat(-1));
        default: return Coefficient(Rat(0), Rat(-1));
    }
}

inline std::string Coefficient::str() const {
    if (mode_ == Mode::Numeric) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(%.17g%+.17gj)", num_.real(), num_.imag());
        return buf;
    }
    if (im_ == 0) return rat_to_string(re_);
    std::string im_part = (im_ == 1)    ? "i"
                          : (im_ == -1) ? "-i"
                                        : rat_to_string(im_) + "*i";
    if (re_ == 0) return im_part;
    std::string out = rat_to_string(re_);
    if (im_ > 0) out += "+";
    return out + im_part;
}

} // namespace berkdyn
