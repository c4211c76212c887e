#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "berkdyn/complexdyn.hpp"

using namespace berkdyn;

namespace {

double angle_of(double u) { return 6.283185307179586 * u; }

PuiseuxSeries mono(long num, long den, long cnum, long cden = 1) {
    return PuiseuxSeries::monomial(Coefficient(rat(cnum, cden)), rat(num, den));
}

SkewMap quad() { return SkewMap(4, 2, {mono(4, 1, -1)}); }

// the fixed curve w = z² + z⁶/2 − z¹⁰/8 + z¹⁴/16 − 5z¹⁸/128 + O(z²²)
PuiseuxSeries fixed_plus() {
    return mono(2, 1, 1) + mono(6, 1, 1, 2) + mono(10, 1, -1, 8) +
           mono(14, 1, 1, 16) + mono(18, 1, -5, 128);
}

PuiseuxSeries fixed_minus() {
    return mono(2, 1, -1) + mono(6, 1, 1, 2) + mono(10, 1, 1, 8) +
           mono(14, 1, 1, 16);
}

} // namespace

TEST_CASE("log-complex representation and summation") {
    LogComplex a = LogComplex::from_complex({3, 4});
    CHECK(a.logmag == doctest::Approx(std::log(5.0)));
    CHECK(std::abs(a.to_complex() - std::complex<double>(3, 4)) < 1e-12);
    CHECK(LogComplex().is_zero());
    CHECK(LogComplex::from_complex(0.0).is_zero());

    bool cancel = true;
    LogComplex s = log_sum({a, LogComplex::from_complex({1, 0})}, &cancel);
    CHECK(!cancel);
    CHECK(std::abs(s.to_complex() - std::complex<double>(4, 4)) < 1e-12);

    // catastrophic cancellation: x + (−x) at the dominant scale
    LogComplex b = a;
    b.phase += 3.14159265358979323846;
    log_sum({a, b}, &cancel);
    CHECK(cancel);

    // empty and singleton sums
    CHECK(log_sum({}, &cancel).is_zero());
    CHECK(!cancel);
    LogComplex single = log_sum({a}, &cancel);
    CHECK(single.logmag == a.logmag);
}

TEST_CASE("invariant line z = 0 iterates exactly") {
    SkewMap f = quad();
    CHECK(domain_radius(f) == 0.5);
    CHECK(h_norm(f, 0.5) == doctest::Approx(0.0625));

    OrbitRecord rec = iterate_orbit(f, 0.0, 0.5, 25);
    REQUIRE(rec.steps.size() == 26);
    CHECK(rec.stop == OrbitRecord::Stop::Budget);
    for (int n = 0; n <= 25; ++n) {
        // pure w-squaring: logmag_w(n) = 2^n·log(1/2), exactly in doubles
        CHECK(rec.steps[n].logmag_w == std::pow(2.0, n) * std::log(0.5));
        CHECK(std::isinf(rec.steps[n].logmag_z));
        CHECK(rec.steps[n].in_omega0); // |0| < |w|²
    }
    CHECK(rec.omega0_entry == 0);
    CHECK(!rec.omega0_exit_after_entry);

    RateDecision dec = attraction_rate(rec);
    CHECK(dec.kind == RateClass::RateC);
    CHECK(std::abs(dec.estimate - std::log(2.0)) < 0.1);

    // the exact z-channel: logmag_z(n) = 4^n·logmag_z(0)
    OrbitRecord gen = iterate_orbit(f, 0.25, 0.5, 10);
    for (int n = 0; n <= 10; ++n)
        CHECK(gen.steps[n].logmag_z == std::pow(4.0, n) * std::log(0.25));

    CHECK_THROWS_AS(iterate_orbit(f, 0.9, 0.1, 5), input_error);
    CHECK_THROWS_AS(iterate_orbit(f, 0.1, 0.9, 5), input_error);

    OrbitRecord origin = iterate_orbit(f, 0.0, 0.0, 5);
    CHECK(origin.stop == OrbitRecord::Stop::Fixed);
    CHECK(origin.steps.size() == 1);
}

TEST_CASE("basin membership is forward invariant") {
    SkewMap f = quad();
    OrbitRecord rec = iterate_orbit(f, 0.1, 0.5, 25);
    REQUIRE(rec.steps.size() == 26);
    CHECK(rec.omega0_entry == 0); // 0.1 < 0.25
    CHECK(!rec.omega0_exit_after_entry);
    for (const auto& step : rec.steps) CHECK(step.in_omega0);
    CHECK(attraction_rate(rec).kind == RateClass::RateC);

    // a point that starts outside Ω₀ but falls in after the w-channel locks
    OrbitRecord late = iterate_orbit(f, 0.4, 0.1, 25);
    CHECK(late.omega0_entry > 0);
    CHECK(!late.omega0_exit_after_entry);
    CHECK(attraction_rate(late).kind == RateClass::RateC);
}

TEST_CASE("naive iteration of a curve point stops on cancellation") {
    SkewMap f = quad();
    std::complex<double> t = 0.05;
    std::complex<double> w0 = eval_curve(fixed_plus(), t);
    OrbitRecord rec = iterate_orbit(f, t, w0, 25);
    CHECK(rec.stop == OrbitRecord::Stop::CancellationLoss);
    CHECK(rec.omega0_entry == -1); // never certified inside Ω₀
    CHECK(rec.iterates() < 10);
    CHECK(attraction_rate(rec).kind == RateClass::Undecided);

    // the valid prefix does track the curve: w_1 ≈ φ(z_1), z_1 = t⁴
    REQUIRE(rec.iterates() >= 1);
    double expect =
        std::log(std::abs(eval_curve(fixed_plus(), std::pow(0.05, 4))));
    CHECK(rec.steps[1].logmag_w == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("curve-channel orbits recover the degree-d rate") {
    SkewMap f = quad();
    OrbitRecord rec = curve_orbit(f, {fixed_plus()}, 0.05, 25);
    REQUIRE(rec.steps.size() == 26);
    for (const auto& step : rec.steps) CHECK(!step.in_omega0);
    // w_n ≈ z_n²: logmag_w(n) ≈ 2·4^n·log t
    CHECK(rec.steps[25].logmag_w ==
          doctest::Approx(2 * std::pow(4.0, 25) * std::log(0.05)));

    RateDecision dec = attraction_rate(rec);
    CHECK(dec.kind == RateClass::RateD);
    CHECK(std::abs(dec.estimate - std::log(4.0)) < 0.1);

    OrbitRecord minus = curve_orbit(f, {fixed_minus()}, {0.0, 0.05}, 25);
    CHECK(attraction_rate(minus).kind == RateClass::RateD);

    CHECK_THROWS_AS(curve_orbit(f, {}, 0.05, 25), input_error);
    CHECK_THROWS_AS(
        curve_orbit(f, {PuiseuxSeries::unknown(ExtRat(rat(4)))}, 0.05, 25),
        input_error);
}

TEST_CASE("complex Green function") {
    SkewMap f = quad();
    // on z = 0 the value is exactly log|w|
    CHECK(green_complex(f, 0.0, 0.4, 1e-9) ==
          doctest::Approx(std::log(0.4)).epsilon(1e-12));
    CHECK(green_complex(f, 0.0, 0.25, 1e-9) ==
          doctest::Approx(std::log(0.25)).epsilon(1e-12));

    // a curve point is never certified inside Ω₀: −∞ sentinel
    std::complex<double> t = 0.05;
    double g_curve = green_complex(f, t, eval_curve(fixed_plus(), t), 1e-9);
    CHECK(std::isinf(g_curve));
    CHECK(g_curve < 0);

    CHECK_THROWS_AS(green_complex(f, 0.0, 0.4, 0.0), input_error);

    // functional equation g(f(p)) = c·g(p) on random points of the domain
    std::mt19937_64 gen(77);
    auto unit = [&] { return ((double)(gen() >> 11)) * 0x1.0p-53; };
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::complex<double> z = std::polar(0.4 * unit(), angle_of(unit()));
        std::complex<double> w =
            std::polar(0.05 + 0.4 * unit(), angle_of(unit()));
        double gp = green_complex(f, z, w, 1e-10);
        if (std::isinf(gp)) continue; // not certified within budget
        std::complex<double> z1 = std::pow(z, 4);
        std::complex<double> w1 = w * w - std::pow(z, 4);
        double gfp = green_complex(f, z1, w1, 1e-10);
        CHECK(std::abs(gfp - 2 * gp) <= 2e-9);
        ++checked;
    }
    CHECK(checked >= 90);
}

TEST_CASE("rate classification refusals") {
    SkewMap f = quad();
    // too few iterates
    CHECK(attraction_rate(iterate_orbit(f, 0.0, 0.5, 5)).kind ==
          RateClass::Undecided);
    // non-contracting boundary orbit |w_n| = 1
    OrbitRecord unimodular;
    unimodular.c = 2;
    unimodular.d = 4;
    for (int n = 0; n <= 20; ++n)
        unimodular.steps.push_back({-1.0, 0, 0.0, 0, false});
    CHECK(attraction_rate(unimodular).kind == RateClass::Undecided);
    // an estimate inside the guard band stays undecided
    OrbitRecord banded;
    banded.c = 2;
    banded.d = 4;
    double mid = (std::log(2.0) + std::log(4.0)) / 2;
    for (int n = 0; n <= 20; ++n)
        banded.steps.push_back({-1.0, 0, -std::exp(mid * n), 0, false});
    CHECK(attraction_rate(banded).kind == RateClass::Undecided);
}

TEST_CASE("cross-validation of curve points against generic points") {
    SkewMap f = quad();
    std::vector<CurveGerm> curves = {
        {fixed_plus(), {0}, 1, rat(22)},
        {fixed_minus(), {1}, 1, rat(18)},
    };
    std::vector<std::pair<std::complex<double>, std::complex<double>>> generic;
    std::mt19937_64 gen(2026);
    auto unit = [&] { return ((double)(gen() >> 11)) * 0x1.0p-53; };
    for (int k = 0; k < 10; ++k)
        generic.push_back({std::polar(0.3 * unit(), angle_of(unit())),
                           std::polar(0.1 + 0.35 * unit(),
                                      angle_of(unit()))});

    CrosscheckReport rep = crosscheck(f, curves, generic, 25, 0.05, 5);
    CHECK(rep.curve_points == 10);
    CHECK(rep.offcurve_points == 10);
    CHECK(rep.rate_d == 10);
    CHECK(rep.rate_c == 10);
    CHECK(rep.disagreements.empty());

    // a curve whose shifted itinerary is absent is reported, not classified
    std::vector<CurveGerm> partial = {{fixed_plus(), {0, 1}, 1, rat(22)}};
    CrosscheckReport missing = crosscheck(f, partial, {}, 25, 0.05, 1);
    CHECK(missing.curve_points == 0);
    REQUIRE(missing.disagreements.size() == 1);

    CHECK_THROWS_AS(crosscheck(f, curves, generic, 25, 0.05, 0), input_error);
}

TEST_CASE("orbit CSV") {
    SkewMap f = quad();
    OrbitRecord rec = iterate_orbit(f, 0.1, 0.5, 3);
    std::string csv = orbit_to_csv(rec);
    CHECK(csv.rfind("n,logmag_z,logmag_w,in_omega0\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4);
    CHECK(csv.find(",1\n") != std::string::npos);
}
