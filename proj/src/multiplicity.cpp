#include "berkdyn/multiplicity.hpp"

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

/// ν^e as an unsigned long (the witness exponents stay tiny).
unsigned long pow_ul(unsigned long base, int e) {
    unsigned long out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

} // namespace

MultiplicityReport bound_multiplicity(const SkewMap& f, const BallCover& cover,
                                      int N) {
    MultiplicityReport rep;
    if (f.rho0().is_infinite()) {
        // product map: the invariant set is the single smooth rigid point 0
        rep.kind = MultiplicityReport::Kind::Bound;
        rep.bound = 1;
        rep.note = "singleton invariant set";
        return rep;
    }
    for (const auto& br : f.critical_data()) {
        if (br.in_crit_plus && br.fate != CriticalBranch::Fate::Escapes)
            throw HypothesisFailed(
                "critical branch " + br.series.str()
                + " with nu >= 2 does not escape; no finite bound certified");
    }
    if (N < 1 || cover.depth() < N)
        throw input_error("cover does not reach level " + std::to_string(N));

    unsigned long Q = 1;
    for (int level : {N - 1, N}) {
        for (const Ball& ball : cover.levels[level].balls) {
            MultiplicityReport::BoundaryEvidence ev;
            ev.point = ball.boundary;
            ev.m = ball.boundary.multiplicity_finite();
            ev.b = ball.boundary.generic_multiplicity();
            ev.b_image = f.apply_point(ball.boundary).generic_multiplicity();
            if (ev.b % ev.m != 0)
                throw HypothesisFailed("m(y) does not divide b(y) at "
                                       + ball.boundary.str());
            Q = lcm_ul(Q, lcm_ul(ev.b, ev.b_image));
            rep.evidence.push_back(std::move(ev));
        }
    }

    bool tame_critical_met = false;
    for (const auto& br : f.critical_data()) {
        if (br.in_crit_plus) continue;
        for (const Ball& ball : cover.levels[N].balls)
            if (ball_contains_series(ball, br.series)) tame_critical_met = true;
    }
    rep.kind = MultiplicityReport::Kind::Bound;
    rep.bound = Q;
    if (tame_critical_met) {
        unsigned long L = 1;
        for (long j = 0; j < f.c(); ++j) {
            Rat ratio = Rat(f.d()) / Rat(1 + j);
            ratio.canonicalize();
            L = lcm_ul(L, denominator_of(ratio));
        }
        rep.bound = Q * pow_ul(L, N);
        rep.note = "includes correction L^N with L = " + std::to_string(L);
    }
    return rep;
}

MultiplicityReport unbounded_witness(const SkewMap& f, const PuiseuxSeries& c0,
                                     int n_max) {
    if (f.rho0().is_infinite())
        throw HypothesisFailed("singleton invariant set has no witness");
    const CriticalBranch* branch = nullptr;
    for (const auto& br : f.critical_data())
        if (br.series == c0) branch = &br;
    if (!branch)
        throw input_error("series " + c0.str() + " is not a critical branch");
    if (branch->nu < 2)
        throw HypothesisFailed("branch has nu = 1; denominators cannot grow");
    if (!(f.apply_rigid(c0) - c0).is_identically_zero())
        throw HypothesisFailed("branch is not fixed; replace f by its "
                               "iterate to reduce to a fixed branch");
    if (n_max < 0) throw input_error("n_max must be nonnegative");

    Rat ratio = Rat(f.d()) / Rat(1 + branch->J);
    ratio.canonicalize();

    MultiplicityReport rep;
    Ball B = root_ball(f);
    if (!ball_contains_series(B, c0))
        throw input_error("root ball does not contain the branch");
    auto record = [&](const Ball& ball) {
        MultiplicityReport::WitnessStep step;
        step.t = ball.t().finite();
        step.A = step.t + 1;
        step.q = denominator_of(step.A);
        rep.trace.push_back(std::move(step));
    };
    record(B);
    for (int n = 1; n <= n_max; ++n) {
        bool found = false;
        for (auto& nb : f.preimage_ball(B)) {
            if (!ball_contains_series(nb, c0)) continue;
            B = std::move(nb);
            found = true;
            break;
        }
        if (!found)
            throw HypothesisFailed("preimage chain lost the branch at step "
                                   + std::to_string(n));
        record(B);
    }

    // verify the exact three-term recurrence on the tail of the trace
    for (std::size_t k = 2; k < rep.trace.size(); ++k) {
        Rat lhs = rep.trace[k].A - rep.trace[k - 1].A;
        Rat rhs = ratio * (rep.trace[k - 1].A - rep.trace[k - 2].A);
        rep.trace[k].follows_recurrence = lhs == rhs;
    }
    int regime = -1;
    for (int k = (int)rep.trace.size() - 1; k >= 2; --k) {
        if (!rep.trace[k].follows_recurrence) break;
        regime = k;
    }
    rep.regime_start = regime;

    if (regime < 0 || (int)rep.trace.size() - regime < 2) {
        rep.kind = MultiplicityReport::Kind::Unresolved;
        rep.note = "trace too short to certify the recurrence regime";
        return rep;
    }
    // in regime the increment keeps a factor nu in its denominator, so the
    // denominators q(A) gain at least that factor per step
    for (std::size_t k = regime; k < rep.trace.size(); ++k) {
        unsigned long q = rep.trace[k].q;
        unsigned long prev = rep.trace[k - 1].q;
        if (q % prev != 0 || q < branch->nu * prev) {
            rep.kind = MultiplicityReport::Kind::Unresolved;
            rep.note = "denominator growth broke at step " + std::to_string(k);
            return rep;
        }
        unsigned long floor = pow_ul(2, (int)k - regime);
        if (q < floor) {
            rep.kind = MultiplicityReport::Kind::Unresolved;
            rep.note = "denominators below the certified floor";
            return rep;
        }
    }
    rep.kind = MultiplicityReport::Kind::Unbounded;
    rep.note = "q(A) gains a factor >= " + std::to_string(branch->nu)
               + " per step from n = " + std::to_string(regime);
    return rep;
}

} // namespace berkdyn
