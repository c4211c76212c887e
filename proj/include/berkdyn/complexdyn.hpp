#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "berkdyn/curves.hpp"

namespace berkdyn {

/**
 * A nonzero complex number kept as (log-magnitude, phase): the only stable
 * representation under the super-exponential contraction of the dynamics,
 * where magnitudes dive far below double underflow within a few steps.
 * logmag = −∞ encodes zero.
 */
struct LogComplex {
    double logmag = -std::numeric_limits<double>::infinity();
    double phase = 0;

    static LogComplex from_complex(std::complex<double> v);
    std::complex<double> to_complex() const; // may underflow to 0
    bool is_zero() const { return std::isinf(logmag) && logmag < 0; }
};

/**
 * Sum of log-represented values by factoring out the dominant magnitude.
 * Flags near-total cancellation: at least two summands at the top magnitude
 * whose sum is relatively below 1e-12 even after a long-double retry.
 */
LogComplex log_sum(const std::vector<LogComplex>& terms, bool* cancellation);

struct OrbitStep {
    double logmag_z = 0, phase_z = 0;
    double logmag_w = 0, phase_w = 0;
    bool in_omega0 = false; // |z| < |w|^c
};

struct OrbitRecord {
    enum class Stop { Budget, CancellationLoss, Fixed };
    std::vector<OrbitStep> steps; // steps[n] = f^n(p)
    Stop stop = Stop::Budget;
    int omega0_entry = -1; // first step inside Ω₀ = {|z| < |w|^c}
    bool omega0_exit_after_entry = false;
    long c = 2, d = 2;

    int iterates() const { return (int)steps.size() - 1; }
};

/// Sup-norm bound for Σ_j ‖h_j‖ on the polydisk of radius r.
double h_norm(const SkewMap& f, double r);
/// Largest radius 2^{-k} ≤ 1/2 with ‖h‖ < 1/2 (the proof's normalization).
double domain_radius(const SkewMap& f);

/**
 * Complex orbit in log coordinates: the z-channel is the exact recursion
 * logmag_z(n) = d^n·logmag_z(0); the w-channel sums w^c + Σ h_j(z)w^j by
 * log-magnitude factoring and stops honestly on irrecoverable cancellation
 * (which is the numeric signature of the super-stable set).
 */
OrbitRecord iterate_orbit(const SkewMap& f, std::complex<double> z,
                          std::complex<double> w, int n);

/**
 * Orbit of a point on an invariant (periodic-itinerary) curve cycle: the
 * n-th iterate is evaluated as w_n = φ_{n mod len}(z_n) directly from the
 * series, which sidesteps the cancellation of naive forward iteration. The
 * parameter t enters through z_0 = t^m.
 */
OrbitRecord curve_orbit(const SkewMap& f,
                        const std::vector<PuiseuxSeries>& cycle,
                        std::complex<double> t, int n);

enum class RateClass { RateC, RateD, Undecided };

struct RateDecision {
    RateClass kind = RateClass::Undecided;
    double estimate = 0; // (1/n)·log|log|w_n||
};

/**
 * Asymptotic contraction rate from an orbit record: estimate compared to
 * the anchors log c and log d with a guard band of half-width 0.1 around
 * their midpoint; fewer than 10 valid iterates give Undecided.
 */
RateDecision attraction_rate(const OrbitRecord& record);

/**
 * Complex Green function g = lim c^{-n} log|w_n|: evaluated with the
 * geometric tail bound (increments ≤ (log 2)/c^n once inside Ω₀) down to
 * the requested tolerance. Returns −∞ when the orbit never certifies Ω₀
 * membership within the budget (the super-stable signature).
 */
double green_complex(const SkewMap& f, std::complex<double> z,
                     std::complex<double> w, double tolerance,
                     int budget = 64);

struct CrosscheckReport {
    int curve_points = 0, offcurve_points = 0;
    int rate_d = 0, rate_c = 0;
    std::vector<std::string> disagreements;
};

/**
 * Cross-validation of the two sides: sampled points of invariant curves
 * must classify RateD, generic off-curve points RateC. Curve itineraries
 * are interpreted periodically; a rotation missing from the supplied set is
 * reported as a disagreement.
 */
CrosscheckReport crosscheck(
    const SkewMap& f, const std::vector<CurveGerm>& curves,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>&
        offcurve,
    int n = 25, double radius = 0.05, int points_per_curve = 1);

/// CSV dump `n,logmag_z,logmag_w,in_omega0`.
std::string orbit_to_csv(const OrbitRecord& record);

} // namespace berkdyn
