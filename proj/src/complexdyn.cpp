#include "berkdyn/complexdyn.hpp"

#include <algorithm>
#include <sstream>

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.28318530717958647692;
// Relative residual below which a sum of near-equal magnitudes cannot be
// trusted: phase round-off (~1e-16 per step) is amplified by the factor c at
// every squaring, so anything under 1e-9 is indistinguishable from noise.
constexpr double kCancelThreshold = 1e-9;

double wrap(double phase) { return std::remainder(phase, kTwoPi); }

/// Σ a_e z^e evaluated at a log-represented z, exact in the exponent.
LogComplex log_eval_series(const PuiseuxSeries& s, double logmag_z,
                           double phase_z, bool* cancellation) {
    std::vector<LogComplex> terms;
    for (const auto& [exp, coeff] : s.terms()) {
        std::complex<double> a = coeff.to_complex();
        if (a == 0.0) continue;
        double e = Rat(exp).get_d();
        LogComplex t;
        if (e == 0) {
            t.logmag = std::log(std::abs(a));
            t.phase = wrap(std::arg(a));
        } else if (std::isinf(logmag_z)) {
            continue; // z = 0 and e > 0
        } else {
            t.logmag = std::log(std::abs(a)) + e * logmag_z;
            t.phase = wrap(std::arg(a) + e * phase_z);
        }
        terms.push_back(t);
    }
    return log_sum(terms, cancellation);
}

bool omega0_member(double logmag_z, double logmag_w, long c) {
    if (std::isinf(logmag_w)) return false; // w = 0: |w|^c = 0
    return logmag_z < (double)c * logmag_w;
}

} // namespace

LogComplex LogComplex::from_complex(std::complex<double> v) {
    LogComplex r;
    if (v == 0.0) return r;
    r.logmag = std::log(std::abs(v));
    r.phase = wrap(std::arg(v));
    return r;
}

std::complex<double> LogComplex::to_complex() const {
    if (is_zero()) return 0.0;
    return std::polar(std::exp(logmag), phase);
}

LogComplex log_sum(const std::vector<LogComplex>& terms, bool* cancellation) {
    if (cancellation) *cancellation = false;
    LogComplex result;
    double top = kNegInf;
    for (const auto& t : terms)
        if (!t.is_zero()) top = std::max(top, t.logmag);
    if (std::isinf(top)) return result; // empty sum

    std::complex<double> s = 0.0;
    int near_top = 0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        s += std::polar(std::exp(t.logmag - top), t.phase);
        if (top - t.logmag < 40) ++near_top; // within e^{-40} of the top
    }

    if (std::abs(s) < kCancelThreshold && near_top >= 2) {
        // retry the dominant-scale sum at extended precision before giving up
        long double re = 0, im = 0;
        for (const auto& t : terms) {
            if (t.is_zero()) continue;
            long double mag = std::exp((long double)(t.logmag - top));
            re += mag * std::cos((long double)t.phase);
            im += mag * std::sin((long double)t.phase);
        }
        s = std::complex<double>((double)re, (double)im);
        if (cancellation && std::abs(s) < kCancelThreshold)
            *cancellation = true;
    }

    if (s == 0.0) return result;
    result.logmag = top + std::log(std::abs(s));
    result.phase = wrap(std::arg(s));
    return result;
}

double h_norm(const SkewMap& f, double r) {
    double total = 0;
    for (const auto& hj : f.h())
        for (const auto& [exp, coeff] : hj.terms())
            total += std::abs(coeff.to_complex()) *
                     std::pow(r, Rat(exp).get_d());
    return total;
}

double domain_radius(const SkewMap& f) {
    double r = 0.5;
    for (int k = 0; k < 60; ++k) {
        if (h_norm(f, r) < 0.5) return r;
        r /= 2;
    }
    return r;
}

OrbitRecord iterate_orbit(const SkewMap& f, std::complex<double> z,
                          std::complex<double> w, int n) {
    if (n < 0) throw input_error("orbit length must be nonnegative");
    double r = domain_radius(f);
    if (std::abs(z) > r || std::abs(w) > r)
        throw input_error("initial point outside the normalized domain of "
                          "radius " + std::to_string(r));

    OrbitRecord rec;
    rec.c = f.c();
    rec.d = f.d();
    LogComplex Z = LogComplex::from_complex(z);
    LogComplex W = LogComplex::from_complex(w);

    auto push = [&](const LogComplex& zz, const LogComplex& ww) {
        OrbitStep step;
        step.logmag_z = zz.logmag;
        step.phase_z = zz.phase;
        step.logmag_w = ww.logmag;
        step.phase_w = ww.phase;
        step.in_omega0 = omega0_member(zz.logmag, ww.logmag, rec.c);
        if (step.in_omega0 && rec.omega0_entry < 0)
            rec.omega0_entry = (int)rec.steps.size();
        if (!step.in_omega0 && rec.omega0_entry >= 0)
            rec.omega0_exit_after_entry = true;
        rec.steps.push_back(step);
    };
    push(Z, W);

    for (int step = 1; step <= n; ++step) {
        if (Z.is_zero() && W.is_zero()) {
            rec.stop = OrbitRecord::Stop::Fixed;
            return rec;
        }

        std::vector<LogComplex> summands;
        LogComplex wc;
        if (!W.is_zero()) {
            wc.logmag = (double)rec.c * W.logmag;
            wc.phase = wrap((double)rec.c * W.phase);
        }
        summands.push_back(wc);
        for (long j = 0; j < rec.c; ++j) {
            bool cancel_h = false;
            LogComplex hj =
                log_eval_series(f.h()[j], Z.logmag, Z.phase, &cancel_h);
            if (cancel_h) {
                rec.stop = OrbitRecord::Stop::CancellationLoss;
                return rec;
            }
            if (hj.is_zero()) continue;
            if (j > 0 && W.is_zero()) continue;
            LogComplex term;
            term.logmag = hj.logmag + (double)j * W.logmag;
            term.phase = wrap(hj.phase + (double)j * W.phase);
            if (j == 0) term = hj;
            summands.push_back(term);
        }

        bool cancel = false;
        LogComplex next_w = log_sum(summands, &cancel);
        if (cancel) {
            rec.stop = OrbitRecord::Stop::CancellationLoss;
            return rec;
        }

        LogComplex next_z;
        if (!Z.is_zero()) {
            next_z.logmag = (double)rec.d * Z.logmag;
            next_z.phase = wrap((double)rec.d * Z.phase);
        }
        Z = next_z;
        W = next_w;
        push(Z, W);
    }
    rec.stop = OrbitRecord::Stop::Budget;
    return rec;
}

OrbitRecord curve_orbit(const SkewMap& f,
                        const std::vector<PuiseuxSeries>& cycle,
                        std::complex<double> t, int n) {
    if (cycle.empty()) throw input_error("curve cycle must be nonempty");
    unsigned long m = 1;
    for (const auto& phi : cycle) {
        if (!phi.has_terms())
            throw input_error("curve cycle entries must have known terms");
        m = lcm_ul(m, phi.ram());
    }

    OrbitRecord rec;
    rec.c = f.c();
    rec.d = f.d();
    double logmag_t = std::log(std::abs(t));
    double phase_t = std::arg(t);

    // z_k = t^{m·d^k}; evaluating φ at z_k uses parameter-space exponents
    // e·m·d^k, which are integers, so the phase is unambiguous.
    double scale = (double)m; // m·d^k
    for (int k = 0; k <= n; ++k) {
        double logmag_z = scale * logmag_t;
        double phase_z = wrap(scale * phase_t);
        const PuiseuxSeries& phi = cycle[(std::size_t)k % cycle.size()];
        std::vector<LogComplex> terms;
        for (const auto& [exp, coeff] : phi.terms()) {
            std::complex<double> a = coeff.to_complex();
            if (a == 0.0) continue;
            double e = Rat(exp).get_d();
            LogComplex term;
            term.logmag = std::log(std::abs(a)) + e * logmag_z;
            term.phase = wrap(std::arg(a) + e * scale * phase_t);
            terms.push_back(term);
        }
        LogComplex W = log_sum(terms, nullptr);

        OrbitStep step;
        step.logmag_z = logmag_z;
        step.phase_z = phase_z;
        step.logmag_w = W.logmag;
        step.phase_w = W.phase;
        step.in_omega0 = omega0_member(logmag_z, W.logmag, rec.c);
        if (step.in_omega0 && rec.omega0_entry < 0)
            rec.omega0_entry = (int)rec.steps.size();
        rec.steps.push_back(step);
        scale *= (double)rec.d;
    }
    rec.stop = OrbitRecord::Stop::Budget;
    return rec;
}

RateDecision attraction_rate(const OrbitRecord& record) {
    RateDecision dec;
    int n = record.iterates();
    if (n < 10) return dec;
    double last = record.steps.back().logmag_w;
    if (std::isinf(last) || last >= 0) return dec;
    dec.estimate = std::log(-last) / n;

    double lc = std::log((double)record.c);
    double ld = std::log((double)record.d);
    double mid = (lc + ld) / 2;
    if (std::abs(dec.estimate - mid) < 0.1) return dec; // guard band
    dec.kind = dec.estimate < mid ? RateClass::RateC : RateClass::RateD;
    return dec;
}

double green_complex(const SkewMap& f, std::complex<double> z,
                     std::complex<double> w, double tolerance, int budget) {
    if (!(tolerance > 0)) throw input_error("tolerance must be positive");
    OrbitRecord rec = iterate_orbit(f, z, w, budget);
    long c = rec.c;
    double cn = 1; // c^n
    for (std::size_t n = 0; n < rec.steps.size(); ++n) {
        const OrbitStep& step = rec.steps[n];
        if (step.in_omega0) {
            // increments past step n are bounded by (log 2)/c^k
            double tail = std::log(2.0) * (double)c / ((double)(c - 1) * cn);
            bool last = n + 1 == rec.steps.size();
            if (tail <= tolerance || last) return step.logmag_w / cn;
        }
        cn *= (double)c;
    }
    return kNegInf; // never certified inside Ω₀
}

CrosscheckReport crosscheck(
    const SkewMap& f, const std::vector<CurveGerm>& curves,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>&
        offcurve,
    int n, double radius, int points_per_curve) {
    if (points_per_curve < 1)
        throw input_error("points_per_curve must be positive");
    CrosscheckReport rep;

    for (std::size_t i = 0; i < curves.size(); ++i) {
        // rotations of the itinerary give the shifted curves of the cycle
        std::vector<PuiseuxSeries> cycle;
        std::vector<int> word = curves[i].itinerary;
        bool complete = true;
        for (std::size_t shift = 0; shift < std::max<std::size_t>(
                                        word.size(), 1);
             ++shift) {
            std::vector<int> rotated(word.begin() + (long)shift, word.end());
            rotated.insert(rotated.end(), word.begin(),
                           word.begin() + (long)shift);
            const CurveGerm* found = nullptr;
            for (const auto& g : curves)
                if (g.itinerary == rotated) {
                    found = &g;
                    break;
                }
            if (!found) {
                complete = false;
                break;
            }
            cycle.push_back(found->series);
            if (cycle.size() > 1 && found == &curves[i]) {
                cycle.pop_back(); // the rotation closed up early
                break;
            }
        }
        if (!complete) {
            std::ostringstream os;
            os << "curve " << i << ": shifted itinerary not in the set";
            rep.disagreements.push_back(os.str());
            continue;
        }

        for (int p = 0; p < points_per_curve; ++p) {
            double angle =
                kTwoPi * ((double)p + 0.37 + (double)i / 3.1) /
                (double)points_per_curve;
            std::complex<double> t = std::polar(radius, angle);
            RateDecision dec = attraction_rate(curve_orbit(f, cycle, t, n));
            ++rep.curve_points;
            if (dec.kind == RateClass::RateD) {
                ++rep.rate_d;
            } else {
                std::ostringstream os;
                os << "curve " << i << " point " << p
                   << ": expected RateD, estimate " << dec.estimate;
                rep.disagreements.push_back(os.str());
            }
        }
    }

    for (std::size_t i = 0; i < offcurve.size(); ++i) {
        RateDecision dec = attraction_rate(
            iterate_orbit(f, offcurve[i].first, offcurve[i].second, n));
        ++rep.offcurve_points;
        if (dec.kind == RateClass::RateC) {
            ++rep.rate_c;
        } else {
            std::ostringstream os;
            os << "off-curve point " << i << ": expected RateC, estimate "
               << dec.estimate;
            rep.disagreements.push_back(os.str());
        }
    }
    return rep;
}

std::string orbit_to_csv(const OrbitRecord& record) {
    std::ostringstream os;
    os.precision(17);
    os << "n,logmag_z,logmag_w,in_omega0\n";
    for (std::size_t n = 0; n < record.steps.size(); ++n) {
        const OrbitStep& s = record.steps[n];
        os << n << ',' << s.logmag_z << ',' << s.logmag_w << ','
           << (s.in_omega0 ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace berkdyn
