#include "berkdyn/skew.hpp"

#include <algorithm>
#include <map>

#include "berkdyn/errors.hpp"

namespace berkdyn {

std::string Ball::str() const {
    std::string out = kind == Kind::Open ? "open(" : "closed(";
    out += "zeta(" + direction.str() + ", " + boundary.t().str() + ")";
    if (contains_critical) out += ", critical";
    return out + ")";
}

SkewMap::SkewMap(long d, long c, std::vector<PuiseuxSeries> h, bool strict)
    : d_(d), c_(c), h_(std::move(h)), mode_(Mode::Exact), strict_(strict) {
    if (d_ < 2 || c_ < 2) throw input_error("skew product requires d, c >= 2");
    if (strict_ && c_ >= d_)
        throw input_error("small relative degree requires c < d "
                          "(use permissive mode to bypass)");
    if ((long)h_.size() > c_) throw input_error("h has entries with j >= c");
    h_.resize(c_);
    for (const auto& s : h_) {
        if (s.mode() == Mode::Numeric) mode_ = Mode::Numeric;
        for (const auto& [e, coeff] : s.terms()) {
            if (e < 1 || denominator_of(e) != 1)
                throw input_error("h_j must be a power series vanishing at 0 "
                                  "(integer exponents >= 1)");
        }
    }
    if (mode_ == Mode::Numeric)
        for (auto& s : h_)
            if (s.mode() == Mode::Exact && s.is_identically_zero())
                s = PuiseuxSeries::zero(Mode::Numeric);
}

PuiseuxSeries SkewMap::apply_rigid(const PuiseuxSeries& phi) const {
    PuiseuxSeries pr = phi.ramify((unsigned long)d_);
    PuiseuxSeries out = pr.pow((unsigned long)c_);
    for (long j = 0; j < c_; ++j) {
        if (h_[j].is_identically_zero()) continue;
        out = out + h_[j].ramify((unsigned long)d_) * pr.pow((unsigned long)j);
    }
    return out;
}

SeriesPoly SkewMap::fiber_poly(const PuiseuxSeries& psi) const {
    SeriesPoly P(c_ + 1);
    for (long j = 0; j < c_; ++j) P[j] = h_[j];
    P[c_] = PuiseuxSeries::constant(
        mode_ == Mode::Numeric ? Coefficient(std::complex<double>(1.0))
                               : Coefficient(Rat(1)));
    P[0] = P[0] - psi.unramify((unsigned long)d_);
    if (P[0].mode() != mode_ && mode_ == Mode::Numeric)
        P[0] = PuiseuxSeries::zero(Mode::Numeric) + P[0];
    return P;
}

SeriesPoly SkewMap::jac_w() const {
    SeriesPoly J(c_);
    for (long j = 1; j < c_; ++j) J[j - 1] = h_[j].scalar(Coefficient(Rat(j)));
    J[c_ - 1] = PuiseuxSeries::constant(Coefficient(Rat(c_)));
    if (mode_ == Mode::Numeric)
        for (auto& s : J)
            if (s.mode() == Mode::Exact)
                s = s.has_terms() ? s : PuiseuxSeries::zero(Mode::Numeric);
    return J;
}

ExtRat SkewMap::rho0() const {
    ExtRat t = ExtRat::infinity();
    for (long j = 0; j < c_; ++j) {
        if (h_[j].is_identically_zero()) continue;
        t = min(t, h_[j].ord() / Rat(c_ - j));
    }
    return t;
}

namespace {

/// min(ord(a − b), t) as an extended rational, certified.
ExtRat capped_ord(const PuiseuxSeries& a, const PuiseuxSeries& b,
                  const ExtRat& t) {
    PuiseuxSeries diff = a - b;
    if (diff.has_terms()) return min(diff.ord(), t);
    if (diff.trunc() >= t) return t;
    throw InsufficientPrecision("difference only known to O(z^"
                                + diff.trunc().str() + "), need z^" + t.str());
}

} // namespace

const std::vector<CriticalBranch>& SkewMap::critical_data(
    const Rat& precision) const {
    if (crit_ready_) return crit_;
    auto roots = newton_puiseux(jac_w(), precision);
    ExtRat trap = rho0();
    std::vector<CriticalBranch> out;
    for (const auto& [root, mult] : roots) {
        CriticalBranch b;
        b.series = root;
        b.J = mult;
        Rat ratio = Rat(d_) / Rat(1 + mult);
        ratio.canonicalize();
        b.nu = denominator_of(ratio);
        b.in_crit_plus = b.nu >= 2;

        const int budget = 32;
        std::vector<PuiseuxSeries> history = {root};
        PuiseuxSeries phi = root;
        b.fate = CriticalBranch::Fate::Unresolved;
        b.steps = budget;
        for (int n = 1; n <= budget; ++n) {
            phi = apply_rigid(phi);
            ExtRat no = phi.has_terms() ? phi.ord() : phi.trunc();
            if (phi.has_terms() && no < trap) {
                b.fate = CriticalBranch::Fate::Escapes;
                b.steps = n;
                b.witness = "leaves the trapping ball (ord " + no.str()
                            + " < " + trap.str() + ") at step "
                            + std::to_string(n);
                break;
            }
            bool exact = phi.trunc().is_infinite();
            if (exact) {
                bool done = false;
                for (std::size_t k = 0; k < history.size(); ++k) {
                    if (history[k] == phi) {
                        b.fate = CriticalBranch::Fate::InK;
                        b.steps = n - (int)k;
                        b.witness = "periodic orbit of period "
                                    + std::to_string(n - (int)k)
                                    + " entered at step " + std::to_string((int)k);
                        done = true;
                        break;
                    }
                }
                if (done) break;
            }
            history.push_back(phi);
        }
        out.push_back(std::move(b));
    }
    crit_ = std::move(out);
    crit_ready_ = true;
    return crit_;
}

ExtRat SkewMap::jac_exponent(const BerkPoint& x) const {
    ExtRat total(Rat(d_ - 1));
    for (const auto& b : critical_data()) {
        PuiseuxSeries diff = x.center() - b.series;
        ExtRat o;
        if (diff.has_terms())
            o = diff.ord();
        else if (diff.trunc() >= x.t())
            o = x.t();
        else
            throw InsufficientPrecision(
                "critical branch too close to distinguish from the center");
        total = total + min(o, x.t()) * Rat(b.J);
    }
    return total;
}

BerkPoint SkewMap::apply_point(const BerkPoint& x) const {
    PuiseuxSeries image = apply_rigid(x.center());
    if (x.is_rigid()) return BerkPoint(image, ExtRat::infinity(), x.view());
    ExtRat spread = jac_exponent(x) - Rat(d_ - 1); // Σ J_i min(ord, t)
    ExtRat tp = (x.t() + spread) / Rat(d_);
    return BerkPoint(image, tp, x.view());
}

PreimageFiber SkewMap::preimages_rigid(const PuiseuxSeries& psi,
                                       const Rat& precision) const {
    PreimageFiber fiber;
    fiber.roots = newton_puiseux(fiber_poly(psi), precision);
    int count = 0;
    for (const auto& r : fiber.roots) count += r.multiplicity;
    if (count != (int)c_)
        throw HypothesisFailed("fiber over L has degree "
                               + std::to_string(count) + ", expected "
                               + std::to_string(c_));

    unsigned long m = psi.ram();
    auto targets = psi.galois_conjugates();

    struct Entry {
        PuiseuxSeries orig;
        PuiseuxSeries key;
        int mult;
    };
    std::vector<Entry> pool;
    for (unsigned long s = 0; s < targets.size(); ++s) {
        auto roots = s == 0 ? fiber.roots
                            : newton_puiseux(fiber_poly(targets[s]), precision);
        for (const auto& r : roots)
            pool.push_back({r.root, r.root.truncated(ExtRat(precision)),
                            r.multiplicity});
    }

    long total_re = 0;
    while (!pool.empty()) {
        Entry seed = pool.front();
        unsigned long mi = seed.orig.ram();
        auto conj = seed.orig.galois_conjugates();
        PuiseuxSeries rep = *std::min_element(
            conj.begin(), conj.end(),
            [](const PuiseuxSeries& a, const PuiseuxSeries& b) {
                return lex_less(a, b);
            });
        long total = 0;
        std::vector<Entry> rest;
        for (const auto& e : pool) {
            bool in_orbit = false;
            for (const auto& c : conj)
                if (c.truncated(ExtRat(precision)) == e.key) in_orbit = true;
            if (in_orbit)
                total += e.mult;
            else
                rest.push_back(e);
        }
        pool = std::move(rest);
        if (total % (long)mi != 0 || ((long)d_ * (long)mi) % (long)m != 0)
            throw HypothesisFailed("Galois orbit counting is inconsistent");
        PreimageOrbit orb;
        orb.rep = rep;
        orb.m = mi;
        orb.r = total / (long)mi;
        orb.e = (long)d_ * (long)mi / (long)m;
        total_re += orb.r * orb.e;
        fiber.orbits.push_back(std::move(orb));
    }
    if (total_re != (long)c_ * d_)
        throw HypothesisFailed("preimage counting: sum r_i e_i = "
                               + std::to_string(total_re) + " != cd");
    return fiber;
}

namespace {

/// Solve s + Σ J_j min(q_j, s) = target for the unique s ≥ 0; entries with
/// infinite q contribute pure slope.
Rat solve_radius(std::vector<std::pair<Rat, long>> finite, long inf_weight,
                 const Rat& target) {
    std::sort(finite.begin(), finite.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Rat C(0);
    Rat S(1 + inf_weight);
    for (const auto& [q, J] : finite) S += J;
    for (const auto& [q, J] : finite) {
        Rat cand = (target - C) / S;
        if (cand <= q) return cand;
        C += Rat(J) * q;
        S -= J;
    }
    return (target - C) / S;
}

/// Keep the part of φ pinning the tangent direction at radius exponent s.
PuiseuxSeries direction_part(const PuiseuxSeries& phi, const Rat& s,
                             bool include_boundary) {
    PuiseuxSeries::TermMap kept;
    for (const auto& [e, c] : phi.terms())
        if (e < s || (include_boundary && e == s)) kept.emplace(e, c);
    return PuiseuxSeries(std::move(kept), ExtRat::infinity(), phi.mode());
}

} // namespace

std::vector<Ball> SkewMap::preimage_ball(const Ball& B) const {
    if (!B.boundary.is_type2())
        throw input_error("preimage_ball requires a type-2 boundary");
    Rat tB = B.t().finite();
    Rat target = Rat(d_) * tB;
    const auto& branches = critical_data();

    Rat prec = target + 4;
    for (int attempt = 0;; ++attempt) {
        try {
            auto roots = newton_puiseux(fiber_poly(B.direction), prec);
            struct Cand {
                PuiseuxSeries phi;
                Rat s;
            };
            std::vector<Cand> cands;
            for (const auto& [phi, mult] : roots) {
                std::vector<std::pair<Rat, long>> finite;
                long inf_weight = 0;
                for (const auto& b : branches) {
                    ExtRat q = capped_ord(phi, b.series, ExtRat(target));
                    if (q >= ExtRat(target))
                        inf_weight += b.J;
                    else
                        finite.emplace_back(q.finite(), b.J);
                }
                cands.push_back({phi, solve_radius(finite, inf_weight, target)});
            }

            // merge candidates describing the same component
            std::vector<Ball> out;
            std::vector<bool> used(cands.size(), false);
            bool open = B.kind == Ball::Kind::Open;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                if (used[i]) continue;
                for (std::size_t j = i + 1; j < cands.size(); ++j) {
                    if (used[j]) continue;
                    ExtRat o = capped_ord(cands[i].phi, cands[j].phi,
                                          ExtRat(prec));
                    bool same = open ? o > ExtRat(cands[i].s)
                                     : o >= ExtRat(cands[i].s);
                    if (same) used[j] = true;
                }
                Ball nb;
                nb.kind = B.kind;
                nb.level = B.level + 1;
                nb.boundary = BerkPoint(cands[i].phi, ExtRat(cands[i].s),
                                        B.boundary.view());
                nb.direction = direction_part(cands[i].phi, cands[i].s, open);
                nb.contains_critical = false;
                for (const auto& b : branches) {
                    PuiseuxSeries diff = cands[i].phi - b.series;
                    ExtRat o = diff.is_identically_zero()
                                   ? ExtRat::infinity()
                                   : capped_ord(cands[i].phi, b.series,
                                                ExtRat(prec));
                    if (open ? o > ExtRat(cands[i].s) : o >= ExtRat(cands[i].s))
                        nb.contains_critical = true;
                }
                out.push_back(std::move(nb));
            }
            return out;
        } catch (const InsufficientPrecision&) {
            if (attempt >= 6) throw;
            prec *= 2;
        }
    }
}

} // namespace berkdyn
