#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>

#include "berkdyn/errors.hpp"

namespace berkdyn {

/// Exact rational number. GMP keeps values in canonical (reduced) form.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Denominator of a reduced rational, as an unsigned long ("q(·)" throughout).
inline unsigned long denominator_of(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return mpz_get_ui(c.get_den().get_mpz_t());
}

inline unsigned long lcm_ul(unsigned long a, unsigned long b) {
    mpz_class g;
    mpz_lcm_ui(g.get_mpz_t(), mpz_class(a).get_mpz_t(), b);
    return mpz_get_ui(g.get_mpz_t());
}

/// Floor of a rational as a long.
inline long floor_long(const Rat& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return mpz_get_si(q.get_mpz_t());
}

/// Serialize as "p" or "p/q".
inline std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parse "p" or "p/q"; returns nullopt on malformed input.
inline std::optional<Rat> rat_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    mpq_class v;
    if (v.set_str(s, 10) != 0) return std::nullopt;
    if (v.get_den() == 0) return std::nullopt;
    v.canonicalize();
    return v;
}

/**
 * Rational extended with +∞, the value lattice for valuations, truncation
 * levels, and radius exponents. −∞ is not representable (never needed).
 */
class ExtRat {
public:
    ExtRat() : inf_(false), v_(0) {}
    ExtRat(const Rat& v) : inf_(false), v_(v) { v_.canonicalize(); }
    ExtRat(long v) : inf_(false), v_(v) {}

    static ExtRat infinity() {
        ExtRat e;
        e.inf_ = true;
        return e;
    }

    bool is_infinite() const { return inf_; }

    const Rat& finite() const {
        if (inf_) throw input_error("expected a finite value, got +inf");
        return v_;
    }

    ExtRat operator+(const ExtRat& o) const {
        if (inf_ || o.inf_) return infinity();
        return ExtRat(v_ + o.v_);
    }
    ExtRat operator-(const Rat& o) const {
        if (inf_) return infinity();
        return ExtRat(v_ - o);
    }
    ExtRat operator*(const Rat& s) const {
        if (inf_) return infinity();
        return ExtRat(v_ * s);
    }
    ExtRat operator/(const Rat& s) const {
        if (inf_) return infinity();
        return ExtRat(v_ / s);
    }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.v_ == b.v_;
    }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
    friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }
    friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }

    friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
    friend ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

    std::string str() const { return inf_ ? "inf" : rat_to_string(v_); }

private:
    bool inf_;
    Rat v_;
};

} // namespace berkdyn
