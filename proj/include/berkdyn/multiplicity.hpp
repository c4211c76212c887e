#pragma once

#include <string>
#include <vector>

#include "berkdyn/cover.hpp"
#include "berkdyn/skew.hpp"

namespace berkdyn {

/**
 * Outcome of a multiplicity analysis on the invariant set: a certified
 * finite bound (an lcm of generic multiplicities at cover boundary points),
 * a certified unboundedness witness (the A-recurrence trace), or Unresolved
 * within the given budget.
 */
struct MultiplicityReport {
    enum class Kind { Bound, Unbounded, Unresolved };
    Kind kind = Kind::Unresolved;
    unsigned long bound = 1; // meaningful when kind == Bound

    /// One cover boundary point with its multiplicity data.
    struct BoundaryEvidence {
        BerkPoint point = BerkPoint::gauss();
        unsigned long m = 1;       // multiplicity m(y)
        unsigned long b = 1;       // generic multiplicity b(y)
        unsigned long b_image = 1; // b(f_⋄ y)
    };
    std::vector<BoundaryEvidence> evidence;

    /// One step ĉ_n of the witness recurrence toward the critical branch.
    struct WitnessStep {
        Rat t;                         // radius exponent of ĉ_n
        Rat A;                         // A(ĉ_n) = 1 + t
        unsigned long q = 1;           // denominator of A(ĉ_n)
        bool follows_recurrence = false; // increment scales exactly by d/(J+1)
    };
    std::vector<WitnessStep> trace;
    int regime_start = -1; // first index from which the recurrence holds

    std::string note;
};

/**
 * Upper bound for the multiplicity of every point of the invariant set,
 * from the generic multiplicities of the level-N and level-(N−1) cover
 * boundary points and of their images, with a correction factor L^N when a
 * critical branch outside Crit⁺ meets the level-N cover
 * (L = lcm_j q(d/(1+j))). Requires every Crit⁺ branch to escape.
 */
MultiplicityReport bound_multiplicity(const SkewMap& f, const BallCover& cover,
                                      int N);

/**
 * Unbounded-multiplicity witness at a fixed critical branch c0 ∈ Crit⁺:
 * follows the cover balls B_n ∋ c0 down the preimage chain, records
 * A(ĉ_n) at their boundaries, verifies the exact recurrence
 * A(ĉ_{n+1}) − A(ĉ_n) = (d/(1+J))·(A(ĉ_n) − A(ĉ_{n−1})), and certifies
 * that the denominators q(A(ĉ_n)) grow without bound.
 */
MultiplicityReport unbounded_witness(const SkewMap& f, const PuiseuxSeries& c0,
                                     int n_max);

} // namespace berkdyn
