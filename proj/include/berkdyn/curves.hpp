#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "berkdyn/markov.hpp"

namespace berkdyn {

/**
 * A germ of analytic curve w = φ(z) attached to a ball itinerary: the unique
 * curve whose n-th iterate stays in the prescribed ball at each step,
 * parameterized as t ↦ (t^m, φ(t^m)) when φ has ramification m. The series
 * is certified (seed-independent) up to order certified_order.
 */
struct CurveGerm {
    PuiseuxSeries series;
    std::vector<int> itinerary;
    unsigned long m = 1;
    Rat certified_order;
};

/// A measure-weighted numeric plaque on one synthesized curve.
struct PlaqueSample {
    std::vector<int> itinerary;
    Rat weight; // cylinder mass / m
    double radius = 0;
    bool radius_warning = false; // sampling radius beyond the growth heuristic
    struct Point {
        std::complex<double> t, z, w;
    };
    std::vector<Point> points;
};

/**
 * Ball-constrained pullback: starting from the center of the last ball of
 * the word, repeatedly pick the rigid preimage lying in the previous ball.
 * The contraction of the pullback makes the seed immaterial; the certified
 * order is measured by a second run from a perturbed seed.
 */
CurveGerm itinerary_to_curve(const SkewMap& f, const MarkovGraph& g,
                             const std::vector<int>& word,
                             const Rat& precision);

struct InvarianceReport {
    struct Entry {
        std::vector<int> itinerary;
        ExtRat residual; // ord(f_⋄(φ_w) − φ_{σw})
        bool flagged;    // residual below the certified order
    };
    std::vector<Entry> entries;
    int skipped = 0; // words whose shift is not in the supplied set
};

/// Check the semi-conjugacy f_⋄(φ_w) = φ_{σw} on a set of synthesized curves.
InvarianceReport verify_invariance(const SkewMap& f,
                                   const std::vector<CurveGerm>& curves);

struct DisjointnessReport {
    struct Pair {
        std::size_t i, j;
        ExtRat separation_order; // first order at which the series differ
        double min_gap;          // minimal numeric distance on the annulus
    };
    std::vector<Pair> pairs;
    int skipped = 0; // identical itineraries
};

/// Symbolic + numeric separation of curves with distinct itineraries.
DisjointnessReport disjointness_check(const std::vector<CurveGerm>& curves,
                                      double r_min, double r_max, int samples);

/// Numeric value of φ on the parameter circle point s (z = s^ram).
std::complex<double> eval_curve(const PuiseuxSeries& phi,
                                std::complex<double> s);

/// Heuristic convergence radius: half the reciprocal coefficient growth rate.
double convergence_radius_heuristic(const PuiseuxSeries& phi);

/**
 * Monte-Carlo discretization of the measure-weighted family of curves:
 * Parry-samples `count` itineraries of length `depth`, synthesizes each
 * curve, and emits numeric points at |t| = radius. Deterministic per seed.
 */
std::vector<PlaqueSample> emit_plaques(const SkewMap& f, const MarkovGraph& g,
                                       const ParryData& p, int count, int depth,
                                       double radius, std::uint64_t seed,
                                       const Rat& precision = Rat(24),
                                       int points_per_plaque = 8);

/// Serialize plaques as CSV rows
/// `itinerary,weight_num,weight_den,t_re,t_im,z_re,z_im,w_re,w_im`.
std::string plaques_to_csv(const std::vector<PlaqueSample>& plaques);

/**
 * Base change of order k: f_k = (z^d, w^c + Σ h_j(z^k) w^j), which satisfies
 * β ∘ f_k = f ∘ β for β(z, w) = (z^k, w).
 */
SkewMap base_change_map(const SkewMap& f, unsigned long k);

} // namespace berkdyn
