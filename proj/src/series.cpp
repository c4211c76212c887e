#include "berkdyn/series.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <sstream>

namespace berkdyn {

PuiseuxSeries::PuiseuxSeries(TermMap terms, ExtRat trunc, Mode mode)
    : trunc_(trunc), mode_(mode) {
    for (auto& [e, c] : terms) {
        if (c.is_zero()) continue;
        if (ExtRat(e) >= trunc_) continue;
        terms_.emplace(e, c);
    }
}

PuiseuxSeries PuiseuxSeries::monomial(const Coefficient& c, const Rat& exp) {
    PuiseuxSeries s;
    s.mode_ = c.mode();
    if (!c.is_zero()) s.terms_.emplace(exp, c);
    return s;
}

unsigned long PuiseuxSeries::ram() const {
    unsigned long m = 1;
    for (const auto& [e, c] : terms_) m = lcm_ul(m, denominator_of(e));
    return m;
}

ExtRat PuiseuxSeries::ord() const {
    if (!terms_.empty()) return ExtRat(terms_.begin()->first);
    if (trunc_.is_infinite()) return ExtRat::infinity();
    throw IndeterminateOrder();
}

ExtRat PuiseuxSeries::ord_lb() const {
    if (!terms_.empty()) return ExtRat(terms_.begin()->first);
    return trunc_;
}

Coefficient PuiseuxSeries::leading() const {
    if (terms_.empty()) throw IndeterminateOrder();
    return terms_.begin()->second;
}

Coefficient PuiseuxSeries::coeff_at(const Rat& exp) const {
    auto it = terms_.find(exp);
    if (it != terms_.end()) return it->second;
    Coefficient z;
    if (mode_ == Mode::Numeric) z = Coefficient(std::complex<double>(0.0));
    return z;
}

PuiseuxSeries PuiseuxSeries::truncated(const ExtRat& T) const {
    return PuiseuxSeries(terms_, min(trunc_, T), mode_);
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    TermMap out;
    for (const auto& [e, c] : terms_) out.emplace(e, -c);
    return PuiseuxSeries(std::move(out), trunc_, mode_);
}

PuiseuxSeries PuiseuxSeries::operator+(const PuiseuxSeries& o) const {
    TermMap out = terms_;
    for (const auto& [e, c] : o.terms_) {
        auto it = out.find(e);
        if (it == out.end()) {
            out.emplace(e, c);
        } else {
            it->second = it->second + c;
        }
    }
    Mode m = (mode_ == Mode::Numeric || o.mode_ == Mode::Numeric)
                 ? Mode::Numeric
                 : Mode::Exact;
    return PuiseuxSeries(std::move(out), min(trunc_, o.trunc_), m);
}

PuiseuxSeries PuiseuxSeries::operator-(const PuiseuxSeries& o) const {
    return *this + (-o);
}

PuiseuxSeries PuiseuxSeries::operator*(const PuiseuxSeries& o) const {
    if (is_identically_zero() || o.is_identically_zero())
        return PuiseuxSeries::zero(mode_);
    // Known modulo z^T with T from the valuation-aware product rule.
    ExtRat t = min(ord_lb() + o.trunc_, o.ord_lb() + trunc_);
    TermMap out;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Rat e = ea + eb;
            if (ExtRat(e) >= t) continue;
            Coefficient p = ca * cb;
            auto it = out.find(e);
            if (it == out.end()) {
                out.emplace(e, p);
            } else {
                it->second = it->second + p;
            }
        }
    }
    Mode m = (mode_ == Mode::Numeric || o.mode_ == Mode::Numeric)
                 ? Mode::Numeric
                 : Mode::Exact;
    return PuiseuxSeries(std::move(out), t, m);
}

PuiseuxSeries PuiseuxSeries::scalar(const Coefficient& c) const {
    if (c.is_zero() && c.mode() == Mode::Exact) return PuiseuxSeries::zero(mode_);
    TermMap out;
    for (const auto& [e, a] : terms_) out.emplace(e, a * c);
    return PuiseuxSeries(std::move(out), trunc_, mode_);
}

PuiseuxSeries PuiseuxSeries::pow(unsigned long e) const {
    PuiseuxSeries acc = PuiseuxSeries::constant(
        mode_ == Mode::Numeric ? Coefficient(std::complex<double>(1.0))
                               : Coefficient(Rat(1)));
    PuiseuxSeries base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

PuiseuxSeries PuiseuxSeries::shift(const Rat& e) const {
    TermMap out;
    for (const auto& [a, c] : terms_) out.emplace(a + e, c);
    return PuiseuxSeries(std::move(out), trunc_ + ExtRat(e), mode_);
}

PuiseuxSeries PuiseuxSeries::inverse(const Rat& prec) const {
    if (terms_.empty()) {
        if (trunc_.is_infinite()) throw input_error("inverse of the zero series");
        throw IndeterminateOrder();
    }
    Rat o = ord().finite();
    Coefficient u = leading();
    Coefficient one = mode_ == Mode::Numeric
                          ? Coefficient(std::complex<double>(1.0))
                          : Coefficient(Rat(1));
    // s = u z^o (1 + r) with ord(r) > 0; invert the unit by geometric series.
    PuiseuxSeries r =
        shift(-o).scalar(one / u) - PuiseuxSeries::constant(one);
    ExtRat target = ExtRat(prec + o);
    PuiseuxSeries sum = PuiseuxSeries::constant(one);
    PuiseuxSeries p = PuiseuxSeries::constant(one);
    while (r.has_terms()) {
        p = p * (-r);
        if (p.ord_lb() >= target) break;
        sum = sum + p;
    }
    return sum.truncated(target).shift(-o).scalar(one / u);
}

PuiseuxSeries PuiseuxSeries::div(const PuiseuxSeries& o, const Rat& prec) const {
    return *this * o.inverse(prec);
}

PuiseuxSeries PuiseuxSeries::ramify(unsigned long k) const {
    if (k == 0) throw input_error("ramify requires k >= 1");
    if (k == 1) return *this;
    Rat f(1, (long)k);
    f.canonicalize();
    TermMap out;
    for (const auto& [e, c] : terms_) out.emplace(e * f, c);
    return PuiseuxSeries(std::move(out), trunc_ * f, mode_);
}

PuiseuxSeries PuiseuxSeries::unramify(unsigned long k) const {
    if (k == 0) throw input_error("unramify requires k >= 1");
    if (k == 1) return *this;
    Rat f((long)k);
    TermMap out;
    for (const auto& [e, c] : terms_) out.emplace(e * f, c);
    return PuiseuxSeries(std::move(out), trunc_ * f, mode_);
}

std::vector<PuiseuxSeries> PuiseuxSeries::galois_conjugates() const {
    unsigned long m = ram();
    if (m == 1) return {*this};
    std::vector<PuiseuxSeries> out;
    out.reserve(m);
    for (unsigned long j = 0; j < m; ++j) {
        TermMap terms;
        for (const auto& [e, c] : terms_) {
            // term at p/q' picks up ζ_m^{j·p·(m/q')}
            long p = mpz_get_si(e.get_num().get_mpz_t());
            unsigned long q = denominator_of(e);
            long ej = (long)(j % m) * p * (long)(m / q);
            Coefficient factor;
            if (mode_ == Mode::Exact) {
                if (m != 2 && m != 4) throw RootsOfUnityUnavailable(m);
                long e4 = ej * (long)(4 / m);
                factor = fourth_root_of_unity((unsigned long)(((e4 % 4) + 4) % 4));
            } else {
                double ang = 2.0 * 3.14159265358979323846 * (double)ej / (double)m;
                factor = Coefficient(std::polar(1.0, ang));
            }
            terms.emplace(e, c * factor);
        }
        out.push_back(PuiseuxSeries(std::move(terms), trunc_, mode_));
    }
    return out;
}

bool lex_less(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return lex_less(ia->second, ib->second);
        ++ia;
        ++ib;
    }
    if (ia != a.terms_.end()) return false;
    if (ib != b.terms_.end()) return true;
    return a.trunc_ < b.trunc_;
}

// ---------------------------------------------------------------------
// text format

namespace {

std::string zpart_str(const Rat& e) {
    if (e == 1) return "z";
    Rat c = e;
    c.canonicalize();
    if (c.get_den() == 1 && c >= 0) return "z^" + c.get_num().get_str();
    return "z^(" + rat_to_string(c) + ")";
}

std::string term_str(const Coefficient& c, const Rat& e) {
    if (e == 0) return c.str();
    std::string zs = zpart_str(e);
    if (c.is_one()) return zs;
    return c.str() + "*" + zs;
}

} // namespace

std::string PuiseuxSeries::str() const {
    if (terms_.empty() && trunc_.is_infinite()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        bool neg = c.mode() == Mode::Exact && c.is_real() && c.re() < 0;
        Coefficient pc = neg ? -c : c;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        out += term_str(pc, e);
        first = false;
    }
    if (!trunc_.is_infinite()) {
        if (!first) out += " + ";
        out += "O(" + zpart_str(trunc_.finite()) + ")";
    }
    return out;
}

namespace {

Rat parse_rat_or_throw(const std::string& s_in, std::size_t pos) {
    std::string s = s_in;
    if (!s.empty() && s.front() == '+') s.erase(0, 1); // GMP rejects a bare '+'
    auto r = rat_from_string(s);
    if (!r) throw ParseError("malformed rational '" + s + "'", pos);
    return *r;
}

/// Exponent part after the letter z: "", "^P", or "^(P/Q)".
Rat parse_zexp(const std::string& s, std::size_t pos) {
    if (s.empty()) return Rat(1);
    if (s[0] != '^') throw ParseError("expected '^' after z", pos);
    std::string body = s.substr(1);
    if (!body.empty() && body.front() == '(') {
        if (body.back() != ')') throw ParseError("unbalanced '(' in exponent", pos);
        body = body.substr(1, body.size() - 2);
    }
    return parse_rat_or_throw(body, pos);
}

/// COEFF: A | A/B | i | B*i | A+B*i | A-B*i (A possibly signed),
/// or "(re+imj)" for numeric mode.
Coefficient parse_coeff(std::string s, std::size_t pos, Mode mode) {
    if (s.empty()) return Coefficient(Rat(1));
    if (s.front() == '(' && s.back() == ')' && s.find('j') != std::string::npos) {
        double re = 0, im = 0;
        char sign = '+';
        std::istringstream in(s.substr(1, s.size() - 2));
        if (!(in >> re >> sign >> im) || (sign != '+' && sign != '-'))
            throw ParseError("malformed numeric coefficient '" + s + "'", pos);
        if (sign == '-') im = -im;
        return Coefficient(std::complex<double>(re, im));
    }
    Coefficient out;
    if (s.back() == 'i') {
        s.pop_back();
        if (!s.empty() && s.back() == '*') s.pop_back();
        // split off the real part at the last top-level +/- (not at index 0)
        std::size_t cut = std::string::npos;
        for (std::size_t k = s.size(); k-- > 1;) {
            if (s[k] == '+' || s[k] == '-') {
                cut = k;
                break;
            }
        }
        Rat re(0), im(1);
        if (cut == std::string::npos) {
            if (!s.empty() && s != "+" && s != "-")
                im = parse_rat_or_throw(s, pos);
            else if (s == "-")
                im = -1;
        } else {
            re = parse_rat_or_throw(s.substr(0, cut), pos);
            std::string imp = s.substr(cut);
            if (imp == "+")
                im = 1;
            else if (imp == "-")
                im = -1;
            else
                im = parse_rat_or_throw(imp, pos);
        }
        out = Coefficient(re, im);
    } else {
        out = Coefficient(parse_rat_or_throw(s, pos));
    }
    if (mode == Mode::Numeric) out = Coefficient(out.to_complex());
    return out;
}

} // namespace

PuiseuxSeries parse_series(const std::string& text, Mode mode) {
    // terms are separated by " + " / " - "; signs inside coefficients carry
    // no surrounding whitespace, so a space-delimited split is unambiguous.
    std::string s = text;
    auto strip = [](std::string& x) {
        while (!x.empty() && std::isspace((unsigned char)x.front())) x.erase(0, 1);
        while (!x.empty() && std::isspace((unsigned char)x.back())) x.pop_back();
    };
    strip(s);
    if (s.empty()) throw ParseError("empty series", 0);
    if (s == "0") return PuiseuxSeries::zero(mode);

    struct Chunk {
        std::string body;
        bool negative;
        std::size_t pos;
    };
    std::vector<Chunk> chunks;
    std::size_t start = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        start = 1;
    }
    std::size_t i = start;
    while (i < s.size()) {
        if (s[i] == ' ' && i + 2 < s.size() && (s[i + 1] == '+' || s[i + 1] == '-')
            && s[i + 2] == ' ') {
            chunks.push_back({s.substr(start, i - start), neg, start});
            neg = s[i + 1] == '-';
            i += 3;
            start = i;
        } else {
            ++i;
        }
    }
    chunks.push_back({s.substr(start), neg, start});

    PuiseuxSeries::TermMap terms;
    ExtRat trunc = ExtRat::infinity();
    for (auto& ch : chunks) {
        strip(ch.body);
        if (ch.body.empty()) throw ParseError("empty term", ch.pos);
        if (ch.body.rfind("O(", 0) == 0) {
            if (ch.body.back() != ')')
                throw ParseError("unbalanced O(...)", ch.pos);
            if (ch.negative) throw ParseError("O-term must be joined by '+'", ch.pos);
            std::string body = ch.body.substr(2, ch.body.size() - 3);
            if (body.empty() || body[0] != 'z')
                throw ParseError("O(...) must contain a power of z", ch.pos);
            trunc = min(trunc, ExtRat(parse_zexp(body.substr(1), ch.pos)));
            continue;
        }
        // locate the series variable; 'z' cannot occur inside a coefficient
        std::size_t zp = ch.body.find('z');
        Rat exp(0);
        std::string cs = ch.body;
        if (zp != std::string::npos) {
            exp = parse_zexp(ch.body.substr(zp + 1), ch.pos);
            cs = ch.body.substr(0, zp);
            if (!cs.empty() && cs.back() == '*') cs.pop_back();
        }
        Coefficient c = parse_coeff(cs, ch.pos, mode);
        if (ch.negative) c = -c;
        auto it = terms.find(exp);
        if (it == terms.end())
            terms.emplace(exp, c);
        else
            it->second = it->second + c;
    }
    return PuiseuxSeries(std::move(terms), trunc, mode);
}

} // namespace berkdyn
