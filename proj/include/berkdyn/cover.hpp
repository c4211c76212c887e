#pragma once

#include <optional>
#include <vector>

#include "berkdyn/skew.hpp"

namespace berkdyn {

/// Does the ball contain the point x (respecting open/closed character)?
bool ball_contains(const Ball& B, const BerkPoint& x);
/// Does the ball contain the rigid point with the given (possibly truncated)
/// center series?
bool ball_contains_series(const Ball& B, const PuiseuxSeries& phi);

/**
 * Nested cover 𝓑_0 ⊇ 𝓑_1 ⊇ … of the invariant set: level n holds the
 * connected components of f_⋄^{-n}(B_0), each linked to the level-(n−1)
 * ball it maps onto.
 */
struct BallCover {
    struct Level {
        std::vector<Ball> balls;
        std::vector<int> parent; // index into the previous level (−1 at root)
    };
    std::vector<Level> levels;

    int depth() const { return (int)levels.size() - 1; }
};

/**
 * The starting open ball B_0 containing the invariant set, centered at 0
 * with radius exponent t0 (default t_ρ/2), validated to satisfy
 * f_⋄(B_0) ⊋ B_0. Throws NoCover for product maps (all h_j = 0, where the
 * invariant set degenerates to the single rigid point 0).
 */
Ball root_ball(const SkewMap& f, std::optional<Rat> t0 = std::nullopt);

/// Level-0 cover made of the root ball alone.
BallCover make_cover(const SkewMap& f, std::optional<Rat> t0 = std::nullopt);

/// Append one refinement level (components of the preimage of each deepest
/// ball); enforces pairwise disjointness.
void refine(const SkewMap& f, BallCover& cover);

struct Classification {
    enum class Kind { Escapes, InCoverAtDepth, CertifiedInK };
    Kind kind;
    int steps = 0;             // escape step, budget, or preperiod + period
    ExtRat exit_exponent;      // Escapes: norm exponent at the exit step
    int preperiod = 0;
    int period = 0;
};

/**
 * Fate of a point under f_⋄: Escapes(n) when some iterate leaves the
 * trapping ball (hence converges to the Gauss point), CertifiedInK on exact
 * recurrence of the full point data, InCoverAtDepth(budget) otherwise.
 */
Classification classify_point(const SkewMap& f, const BerkPoint& x,
                              int budget = 32);

/**
 * Minimal N such that no level-(N−1) ball contains a critical branch.
 * Requires every critical branch to escape (CriticalInK / BudgetExceeded
 * otherwise).
 */
int choose_markov_level(const SkewMap& f, int max_level = 32,
                        std::optional<Rat> t0 = std::nullopt);

} // namespace berkdyn
