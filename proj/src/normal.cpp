#include "berkdyn/normal.hpp"

#include <sstream>

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

/// Generalized binomial coefficient C(a, k) for rational a.
Rat binomial(const Rat& a, unsigned long k) {
    Rat out(1);
    for (unsigned long i = 0; i < k; ++i) {
        Rat factor = (a - Rat((long)i)) / Rat((long)(i + 1));
        out *= factor;
    }
    out.canonicalize();
    return out;
}

/// Truncate a univariate series (in w) below integer order M.
PuiseuxSeries univar_trunc(const PuiseuxSeries& s, long M) {
    return s.truncated(ExtRat(Rat(M)));
}

} // namespace

PuiseuxSeries univar_compose(const PuiseuxSeries& a, const PuiseuxSeries& b,
                             long M) {
    PuiseuxSeries out = PuiseuxSeries::zero();
    for (const auto& [e, coeff] : a.terms()) {
        long k = floor_long(e);
        if (Rat(k) != e) throw input_error("integer exponents required");
        PuiseuxSeries p = PuiseuxSeries::constant(Coefficient(1));
        for (long i = 0; i < k; ++i) p = univar_trunc(p * b, M);
        out = out + p.scalar(coeff);
    }
    return univar_trunc(out, M);
}

PuiseuxSeries univar_invert(const PuiseuxSeries& beta, long M) {
    PuiseuxSeries w = PuiseuxSeries::monomial(Coefficient(1), Rat(1));
    PuiseuxSeries rho = beta - w; // ord ≥ 2
    PuiseuxSeries gamma = w;
    for (long i = 0; i < M; ++i)
        gamma = w - univar_compose(rho, gamma, M);
    return univar_trunc(gamma, M);
}

void BivariateSeries::insert(long i, long j, const Coefficient& c) {
    if (i < 0 || j < 0) throw input_error("negative bivariate exponent");
    if (i + j >= trunc_) return;
    if (c.is_zero()) return;
    auto it = terms_.find({i, j});
    if (it == terms_.end()) {
        terms_.emplace(Key{i, j}, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

BivariateSeries BivariateSeries::monomial(const Coefficient& c, long i, long j,
                                          long trunc) {
    BivariateSeries out(trunc);
    out.insert(i, j, c);
    return out;
}

Coefficient BivariateSeries::coeff_at(long i, long j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Coefficient(0) : it->second;
}

long BivariateSeries::ord() const {
    long best = trunc_;
    for (const auto& [key, coeff] : terms_)
        best = std::min(best, key.first + key.second);
    return best;
}

BivariateSeries BivariateSeries::truncated(long t) const {
    BivariateSeries out(std::min(t, trunc_));
    for (const auto& [key, coeff] : terms_)
        out.insert(key.first, key.second, coeff);
    return out;
}

BivariateSeries BivariateSeries::operator-() const {
    BivariateSeries out(trunc_);
    for (const auto& [key, coeff] : terms_)
        out.insert(key.first, key.second, -coeff);
    return out;
}

BivariateSeries BivariateSeries::operator+(const BivariateSeries& o) const {
    BivariateSeries out(std::min(trunc_, o.trunc_));
    for (const auto& [key, coeff] : terms_)
        out.insert(key.first, key.second, coeff);
    for (const auto& [key, coeff] : o.terms_)
        out.insert(key.first, key.second, coeff);
    return out;
}

BivariateSeries BivariateSeries::operator-(const BivariateSeries& o) const {
    return *this + (-o);
}

BivariateSeries BivariateSeries::operator*(const BivariateSeries& o) const {
    BivariateSeries out(std::min(trunc_, o.trunc_));
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            out.insert(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
}

BivariateSeries BivariateSeries::scalar(const Coefficient& c) const {
    BivariateSeries out(trunc_);
    for (const auto& [key, coeff] : terms_)
        out.insert(key.first, key.second, coeff * c);
    return out;
}

BivariateSeries BivariateSeries::pow_int(unsigned long e) const {
    BivariateSeries acc = monomial(Coefficient(1), 0, 0, trunc_);
    for (unsigned long i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

BivariateSeries BivariateSeries::substitute(const BivariateSeries& Z,
                                            const BivariateSeries& W) const {
    if ((!Z.is_zero() && Z.ord() < 1) || (!W.is_zero() && W.ord() < 1))
        throw input_error("substitution requires series of order >= 1");
    long t = std::min({trunc_, Z.trunc_, W.trunc_});
    BivariateSeries out(t);
    std::vector<BivariateSeries> zpow = {monomial(Coefficient(1), 0, 0, t)};
    std::vector<BivariateSeries> wpow = {monomial(Coefficient(1), 0, 0, t)};
    auto power = [&](std::vector<BivariateSeries>& cache,
                     const BivariateSeries& base, long e) {
        while ((long)cache.size() <= e) cache.push_back(cache.back() * base);
        return cache[e];
    };
    for (const auto& [key, coeff] : terms_) {
        // unknown terms of total degree >= trunc map to order >= trunc
        if (key.first + key.second >= t) continue;
        out = out + (power(zpow, Z, key.first) * power(wpow, W, key.second))
                        .scalar(coeff);
    }
    return out;
}

BivariateSeries BivariateSeries::binomial_pow(const BivariateSeries& u,
                                              const Rat& a) {
    if (!u.is_zero() && u.ord() < 1)
        throw input_error("binomial series requires order >= 1");
    BivariateSeries out(u.trunc_);
    BivariateSeries upow = monomial(Coefficient(1), 0, 0, u.trunc_);
    for (long k = 0; k < u.trunc_; ++k) {
        if (k > 0) {
            upow = upow * u;
            if (upow.is_zero()) break;
        }
        out = out + upow.scalar(Coefficient(binomial(a, (unsigned long)k)));
    }
    return out;
}

BivariateSeries BivariateSeries::shift_z(long k) const {
    BivariateSeries out(trunc_ - k);
    for (const auto& [key, coeff] : terms_) {
        if (key.first < k)
            throw input_error("series is not divisible by z^"
                              + std::to_string(k));
        out.insert(key.first - k, key.second, coeff);
    }
    return out;
}

PuiseuxSeries BivariateSeries::slice_z0() const { return z_coefficient(0); }

PuiseuxSeries BivariateSeries::z_coefficient(long m) const {
    PuiseuxSeries out = PuiseuxSeries::zero();
    for (const auto& [key, coeff] : terms_)
        if (key.first == m)
            out = out + PuiseuxSeries::monomial(coeff, Rat(key.second));
    return out;
}

std::string BivariateSeries::str() const {
    if (terms_.empty()) return "0";
    // sort by total degree, then z-degree, for a stable readable form
    std::vector<std::pair<Key, Coefficient>> sorted(terms_.begin(),
                                                    terms_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        long da = a.first.first + a.first.second;
        long db = b.first.first + b.first.second;
        if (da != db) return da < db;
        return a.first < b.first;
    });
    std::string out;
    for (const auto& [key, coeff] : sorted) {
        if (!out.empty()) out += " + ";
        out += coeff.str();
        if (key.first > 0) out += "*z^" + std::to_string(key.first);
        if (key.second > 0) out += "*w^" + std::to_string(key.second);
    }
    return out;
}

BivariateSeries BivariateSeries::parse(const std::string& text, long trunc) {
    BivariateSeries out(trunc);
    if (text == "0" || text.empty()) return out;
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        std::size_t next = text.find(" + ", pos);
        std::string piece = text.substr(
            pos, next == std::string::npos ? std::string::npos : next - pos);
        pos = next == std::string::npos ? next : next + 3;

        long i = 0, j = 0;
        std::string coeff_text = piece;
        auto take = [&](const std::string& marker, long& e) {
            std::size_t at = coeff_text.find(marker);
            if (at == std::string::npos) return;
            std::size_t end = coeff_text.find('*', at + marker.size());
            std::string digits = coeff_text.substr(
                at + marker.size(),
                end == std::string::npos ? std::string::npos
                                         : end - at - marker.size());
            try {
                e = std::stol(digits);
            } catch (const std::exception&) {
                throw ParseError("bad exponent in '" + piece + "'", at);
            }
            coeff_text.erase(at, (end == std::string::npos
                                      ? coeff_text.size()
                                      : end + 1) - at);
        };
        take("z^", i);
        take("w^", j);
        while (!coeff_text.empty() && coeff_text.back() == '*')
            coeff_text.pop_back();
        if (coeff_text.empty()) coeff_text = "1";
        auto value = rat_from_string(coeff_text);
        if (!value)
            throw ParseError("bad coefficient '" + coeff_text + "'", 0);
        out.insert(i, j, Coefficient(*value));
    }
    return out;
}

GermMap compose(const GermMap& outer, const GermMap& inner) {
    GermMap out;
    out.fz = outer.fz.substitute(inner.fz, inner.fw);
    out.fw = outer.fw.substitute(inner.fz, inner.fw);
    out.d = inner.d;
    out.c = inner.c;
    return out;
}

StraightenResult straighten_z(const GermMap& g, long M) {
    if (g.d < 2) throw input_error("straightening requires d >= 2");
    long T = M + g.d;
    BivariateSeries fz = g.fz.truncated(T);
    BivariateSeries fw = g.fw.truncated(T);
    BivariateSeries eps = fz.shift_z(g.d).truncated(T)
                          - BivariateSeries::monomial(Coefficient(1), 0, 0, T);

    // 1 + φ = Π_{n≥1} (1 + ε∘f^{n−1})^{d^{−n}}
    BivariateSeries one = BivariateSeries::monomial(Coefficient(1), 0, 0, T);
    BivariateSeries product = one;
    BivariateSeries Z = BivariateSeries::var_z(T);
    BivariateSeries W = BivariateSeries::var_w(T);
    Rat dinv(1);
    for (long n = 1; n <= T; ++n) {
        dinv /= Rat(g.d);
        BivariateSeries pulled = eps.substitute(Z, W);
        if (pulled.is_zero() || pulled.ord() >= T) break;
        product = product * BivariateSeries::binomial_pow(pulled, dinv);
        BivariateSeries Znew = fz.substitute(Z, W);
        W = fw.substitute(Z, W);
        Z = Znew;
    }
    StraightenResult out;
    out.phi = (product - one).truncated(M);

    // conjugate: invert Φ(z, w) = (z(1 + φ), w) by fixed-point iteration
    BivariateSeries z1 = BivariateSeries::var_z(T);
    BivariateSeries w1 = BivariateSeries::var_w(T);
    BivariateSeries phi = product - one;
    BivariateSeries psi = BivariateSeries::zero(T); // z = z'(1 + ψ(z', w))
    for (long i = 0; i < T; ++i) {
        BivariateSeries inner = z1 * (one + psi);
        BivariateSeries denom = one + phi.substitute(inner, w1);
        // 1/denom by binomial with exponent −1
        psi = BivariateSeries::binomial_pow(denom - one, Rat(-1)) - one;
    }
    GermMap Phi{z1 * (one + phi), w1, g.d, g.c};
    GermMap PhiInv{z1 * (one + psi), w1, g.d, g.c};
    out.conjugated = compose(Phi, compose(GermMap{fz, fw, g.d, g.c}, PhiInv));
    out.conjugated.fz = out.conjugated.fz.truncated(T);
    out.conjugated.fw = out.conjugated.fw.truncated(T);
    return out;
}

PuiseuxSeries bottcher_1d(const PuiseuxSeries& p, long M) {
    ExtRat o = p.has_terms() ? p.ord() : p.trunc();
    if (o.is_infinite() || !p.has_terms()
        || p.coeff_at(o.finite()) != Coefficient(1)
        || denominator_of(o.finite()) != 1)
        throw input_error("Boettcher step requires leading term w^c");
    long c = floor_long(o.finite());
    if (c < 2) throw input_error("Boettcher step requires order >= 2");

    PuiseuxSeries pt = univar_trunc(p, M);
    PuiseuxSeries beta = PuiseuxSeries::monomial(Coefficient(1), Rat(1));
    for (long n = 2; c + n - 1 < M; ++n) {
        PuiseuxSeries lhs = univar_compose(beta, pt, M);
        PuiseuxSeries rhs = univar_trunc(beta.pow((unsigned long)c), M);
        Coefficient delta = (lhs - rhs).coeff_at(Rat(c + n - 1));
        if (delta.is_zero()) continue;
        beta = beta + PuiseuxSeries::monomial(delta / Coefficient((long)c),
                                              Rat(n));
    }
    return beta;
}

NormalizeResult normalize(const GermMap& g, long M) {
    long T = M;
    BivariateSeries zd =
        BivariateSeries::monomial(Coefficient(1), g.d, 0, T);
    if (!(g.fz.truncated(T) == zd))
        throw input_error("normalize requires a straightened first component");
    PuiseuxSeries restriction = g.fw.slice_z0();
    PuiseuxSeries wc = PuiseuxSeries::monomial(Coefficient(1), Rat(g.c));
    if (!(univar_trunc(restriction, T) == univar_trunc(wc, T))
        && restriction != wc)
        throw input_error("normalize requires a Boettcher-normalized "
                          "restriction w^c");

    NormalizeResult out;
    GermMap F{g.fz.truncated(T), g.fw.truncated(T), g.d, g.c};
    BivariateSeries z1 = BivariateSeries::var_z(T);
    BivariateSeries w1 = BivariateSeries::var_w(T);
    for (long m = 1; m < M; ++m) {
        PuiseuxSeries gm = F.fw.z_coefficient(m);
        PuiseuxSeries gm_plus = PuiseuxSeries::zero();
        for (const auto& [e, coeff] : gm.terms())
            if (e >= Rat(g.c))
                gm_plus = gm_plus + PuiseuxSeries::monomial(coeff, e);
        if (!gm_plus.has_terms()) continue;

        // φ_m = g_m^+ / (c w^{c−1}); exactness is guaranteed by ord_w ≥ c
        PuiseuxSeries phi_m = PuiseuxSeries::zero();
        for (const auto& [e, coeff] : gm_plus.terms())
            phi_m = phi_m
                    + PuiseuxSeries::monomial(coeff / Coefficient(g.c),
                                              e - Rat(g.c - 1));

        BivariateSeries shear(T);
        for (const auto& [e, coeff] : phi_m.terms())
            shear = shear + BivariateSeries::monomial(coeff, m,
                                                      floor_long(e), T);
        GermMap Phi{z1, w1 + shear, g.d, g.c};
        // inverse shear by fixed-point iteration in the w-component
        BivariateSeries psi = BivariateSeries::zero(T);
        for (long i = 0; i * m < T; ++i)
            psi = -shear.substitute(z1, w1 + psi);
        GermMap PhiInv{z1, w1 + psi, g.d, g.c};
        F = compose(Phi, compose(F, PhiInv));
        F.fz = F.fz.truncated(T);
        F.fw = F.fw.truncated(T);
        out.ledger.push_back({m, phi_m});
    }

    // extract the skew-product data: every surviving term below the
    // truncation must now have w-degree ≤ c − 1 (besides w^c itself)
    std::vector<PuiseuxSeries> h((std::size_t)g.c, PuiseuxSeries::zero());
    for (const auto& [key, coeff] : F.fw.terms()) {
        if (key.first == 0 && key.second == g.c) continue;
        if (key.second >= g.c)
            throw hypothesis_error("normal-form induction left a w-degree "
                                   ">= c term below the truncation");
        h[(std::size_t)key.second] =
            h[(std::size_t)key.second]
            + PuiseuxSeries::monomial(coeff, Rat(key.first));
    }
    for (auto& hj : h) hj = hj.truncated(ExtRat(Rat(M)));
    out.conjugated = F;
    out.normal_form = SkewMap(g.d, g.c, std::move(h), /*strict=*/false);
    return out;
}

GermMap ledger_to_germ(const std::vector<ShearStage>& ledger, long d, long c,
                       long trunc) {
    BivariateSeries z1 = BivariateSeries::var_z(trunc);
    BivariateSeries w1 = BivariateSeries::var_w(trunc);
    GermMap acc{z1, w1, d, c};
    for (const auto& stage : ledger) {
        BivariateSeries shear(trunc);
        for (const auto& [e, coeff] : stage.phi_m.terms())
            shear = shear + BivariateSeries::monomial(coeff, stage.m,
                                                      floor_long(e), trunc);
        acc = compose(GermMap{z1, w1 + shear, d, c}, acc);
    }
    return acc;
}

NormalizeResult full_normalize(const GermMap& g, long M) {
    StraightenResult st = straighten_z(g, M);
    GermMap mid = st.conjugated;
    mid.fz = BivariateSeries::monomial(Coefficient(1), g.d, 0, M);
    mid.fw = mid.fw.truncated(M);

    PuiseuxSeries beta = bottcher_1d(mid.fw.slice_z0(), M);
    PuiseuxSeries gamma = univar_invert(beta, M);
    BivariateSeries z1 = BivariateSeries::var_z(M);
    BivariateSeries w1 = BivariateSeries::var_w(M);
    auto lift = [&](const PuiseuxSeries& s) {
        BivariateSeries out(M);
        for (const auto& [e, coeff] : s.terms())
            out = out + BivariateSeries::monomial(coeff, 0, floor_long(e), M);
        return out;
    };
    GermMap B{z1, lift(beta), g.d, g.c};
    GermMap BInv{z1, lift(gamma), g.d, g.c};
    GermMap boettchered = compose(B, compose(mid, BInv));
    boettchered.fz = BivariateSeries::monomial(Coefficient(1), g.d, 0, M);
    // drop sub-truncation noise in the restriction left by the reversion
    BivariateSeries cleaned(M);
    for (const auto& [key, coeff] : boettchered.fw.terms()) {
        if (key.first == 0 && key != BivariateSeries::Key{0, g.c}) continue;
        cleaned = cleaned
                  + BivariateSeries::monomial(coeff, key.first, key.second, M);
    }
    boettchered.fw = cleaned;
    return normalize(boettchered, M);
}

} // namespace berkdyn
