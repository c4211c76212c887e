#include "berkdyn/cover.hpp"

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

/// Certified test ord(diff) ≥ t (strict = require >). Throws when the
/// truncation cannot decide.
bool ord_at_least(const PuiseuxSeries& diff, const ExtRat& t, bool strict) {
    if (diff.has_terms()) {
        ExtRat o = diff.ord();
        return strict ? o > t : o >= t;
    }
    if (diff.trunc().is_infinite()) return true; // ord = +inf
    ExtRat lb = diff.trunc();
    if (strict ? lb > t : lb >= t) return true;
    throw InsufficientPrecision("containment test undecidable at O(z^"
                                + lb.str() + ") against t = " + t.str());
}

} // namespace

bool ball_contains(const Ball& B, const BerkPoint& x) {
    const ExtRat& t = B.t();
    bool strict = B.kind == Ball::Kind::Open;
    if (strict ? !(x.t() > t) : !(x.t() >= t)) return false;
    return ord_at_least(x.center() - B.direction, t, strict);
}

bool ball_contains_series(const Ball& B, const PuiseuxSeries& phi) {
    return ball_contains(B, BerkPoint::rigid(phi));
}

Ball root_ball(const SkewMap& f, std::optional<Rat> t0_opt) {
    ExtRat trap = f.rho0();
    if (trap.is_infinite())
        throw NoCover("product map: the invariant set is the single rigid "
                      "point 0");
    Rat t0 = t0_opt ? *t0_opt : trap.finite() / 2;
    if (t0 <= 0)
        throw InvalidRoot("radius exponent t0 must be positive");
    Ball B;
    B.boundary = BerkPoint(PuiseuxSeries::zero(f.mode()), ExtRat(t0));
    B.direction = PuiseuxSeries::zero(f.mode());
    B.kind = Ball::Kind::Open;
    B.level = 0;
    BerkPoint image = f.apply_point(B.boundary);
    if (BerkPoint::compare(B.boundary, image) != BerkPoint::Order::Less)
        throw InvalidRoot("ball with boundary t = " + rat_to_string(t0)
                          + " is not strictly expanded by the map");
    for (const auto& b : f.critical_data())
        if (ball_contains_series(B, b.series)) B.contains_critical = true;
    return B;
}

BallCover make_cover(const SkewMap& f, std::optional<Rat> t0) {
    BallCover cover;
    cover.levels.push_back({{root_ball(f, t0)}, {-1}});
    return cover;
}

void refine(const SkewMap& f, BallCover& cover) {
    if (cover.levels.empty())
        throw input_error("refine requires a rooted cover");
    const auto& prev = cover.levels.back();
    BallCover::Level next;
    for (std::size_t i = 0; i < prev.balls.size(); ++i) {
        for (auto& nb : f.preimage_ball(prev.balls[i])) {
            next.balls.push_back(std::move(nb));
            next.parent.push_back((int)i);
        }
    }
    for (std::size_t i = 0; i < next.balls.size(); ++i) {
        for (std::size_t j = i + 1; j < next.balls.size(); ++j) {
            if (ball_contains_series(next.balls[i], next.balls[j].direction)
                || ball_contains_series(next.balls[j], next.balls[i].direction))
                throw HypothesisFailed("cover balls at level "
                                       + std::to_string(cover.levels.size())
                                       + " are not pairwise disjoint");
        }
    }
    cover.levels.push_back(std::move(next));
}

Classification classify_point(const SkewMap& f, const BerkPoint& x,
                              int budget) {
    ExtRat trap = f.rho0();
    std::vector<BerkPoint> history;
    BerkPoint y = x;
    for (int n = 0; n <= budget; ++n) {
        if (n > 0) y = f.apply_point(y);
        bool norm_known = true;
        ExtRat ne;
        try {
            ne = y.norm_exponent();
        } catch (const IndeterminateOrder&) {
            norm_known = false; // all known terms vanish; cannot certify
        }
        if (n == 0 && norm_known && ne <= ExtRat(0))
            throw input_error("classify_point requires a point of the open "
                              "unit ball");
        if (norm_known && ne < trap) {
            Classification out{Classification::Kind::Escapes, n, ne, 0, 0};
            return out;
        }
        if (y.is_certified()) {
            for (std::size_t k = 0; k < history.size(); ++k) {
                if (history[k] == y) {
                    Classification out{Classification::Kind::CertifiedInK,
                                       n, ExtRat(0), (int)k, n - (int)k};
                    return out;
                }
            }
        }
        history.push_back(y);
    }
    return {Classification::Kind::InCoverAtDepth, budget, ExtRat(0), 0, 0};
}

int choose_markov_level(const SkewMap& f, int max_level,
                        std::optional<Rat> t0) {
    if (f.rho0().is_infinite())
        throw NoCover("product map: the invariant set is the single rigid "
                      "point 0");
    for (const auto& b : f.critical_data()) {
        if (b.fate == CriticalBranch::Fate::InK)
            throw CriticalInK(b.series.str());
        if (b.fate == CriticalBranch::Fate::Unresolved)
            throw BudgetExceeded("critical orbit unresolved; cannot certify a "
                                 "critical-free level");
    }
    BallCover cover = make_cover(f, t0);
    for (int N = 1; N <= max_level; ++N) {
        while (cover.depth() < N - 1) refine(f, cover);
        bool clean = true;
        for (const auto& b : cover.levels[N - 1].balls)
            if (b.contains_critical) clean = false;
        if (clean) return N;
    }
    throw BudgetExceeded("no critical-free cover level up to "
                         + std::to_string(max_level));
}

} // namespace berkdyn
