#include "berkdyn/curves.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

/// ord of a difference as a certified lower bound: an actual term wins,
/// otherwise the truncation level.
ExtRat residual_order(const PuiseuxSeries& diff) {
    if (diff.has_terms()) return diff.ord();
    return diff.trunc();
}

void check_word(const MarkovGraph& g, const std::vector<int>& word) {
    if (word.empty()) throw input_error("itinerary must be nonempty");
    for (int v : word)
        if (v < 0 || v >= g.size()) throw UnknownVertex(std::to_string(v));
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (!g.adj[word[i]][word[i + 1]])
            throw input_error("itinerary is not admissible at position "
                              + std::to_string(i));
}

PuiseuxSeries pullback_run(const SkewMap& f, const MarkovGraph& g,
                           const std::vector<int>& word, const Rat& precision,
                           const PuiseuxSeries& seed) {
    PuiseuxSeries phi = seed;
    for (int i = (int)word.size() - 2; i >= 0; --i) {
        PreimageFiber fib = f.preimages_rigid(phi, precision);
        const PuiseuxSeries* pick = nullptr;
        for (const auto& r : fib.roots)
            if (ball_contains_series(g.vertices[word[i]], r.root)) {
                pick = &r.root;
                break;
            }
        if (!pick)
            throw NoPreimageInBall("no rigid preimage inside ball "
                                   + std::to_string(word[i]));
        phi = *pick;
    }
    return phi;
}

} // namespace

CurveGerm itinerary_to_curve(const SkewMap& f, const MarkovGraph& g,
                             const std::vector<int>& word,
                             const Rat& precision) {
    check_word(g, word);
    const Ball& last = g.vertices[word.back()];
    PuiseuxSeries seed = last.direction;
    // perturbation one exponent inside the ball: the contraction of the
    // pullback must erase it up to the certified order
    PuiseuxSeries perturbed =
        seed + PuiseuxSeries::monomial(Coefficient(1), last.t().finite() + 1);

    CurveGerm germ;
    germ.itinerary = word;
    germ.series = pullback_run(f, g, word, precision, seed);
    PuiseuxSeries other = pullback_run(f, g, word, precision, perturbed);
    ExtRat agree = residual_order(germ.series - other);
    germ.certified_order = agree.is_infinite() ? precision
                                               : std::min(agree.finite(),
                                                          precision);
    germ.m = germ.series.ram();
    return germ;
}

InvarianceReport verify_invariance(const SkewMap& f,
                                   const std::vector<CurveGerm>& curves) {
    InvarianceReport rep;
    for (const auto& germ : curves) {
        if (germ.itinerary.size() < 2) {
            ++rep.skipped;
            continue;
        }
        std::vector<int> shifted(germ.itinerary.begin() + 1,
                                 germ.itinerary.end());
        const CurveGerm* next = nullptr;
        for (const auto& cand : curves) {
            if (cand.itinerary.size() < shifted.size()) continue;
            if (std::equal(shifted.begin(), shifted.end(),
                           cand.itinerary.begin())) {
                next = &cand;
                if (cand.itinerary.size() == shifted.size()) break;
            }
        }
        if (!next) {
            ++rep.skipped;
            continue;
        }
        PuiseuxSeries diff = f.apply_rigid(germ.series) - next->series;
        InvarianceReport::Entry entry;
        entry.itinerary = germ.itinerary;
        entry.residual = residual_order(diff);
        // a genuine discrepancy term is a violation; a pure truncation
        // bound is the expected certificate
        entry.flagged = diff.has_terms();
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

std::complex<double> eval_curve(const PuiseuxSeries& phi,
                                std::complex<double> s) {
    unsigned long m = phi.ram();
    std::complex<double> out = 0;
    for (const auto& [e, coeff] : phi.terms()) {
        Rat scaled = e * Rat((long)m);
        scaled.canonicalize();
        out += coeff.to_complex()
               * std::pow(s, (double)floor_long(scaled));
    }
    return out;
}

double convergence_radius_heuristic(const PuiseuxSeries& phi) {
    unsigned long m = phi.ram();
    double growth = 0;
    for (const auto& [e, coeff] : phi.terms()) {
        double n = e.get_d() * (double)m;
        if (n < 1) continue;
        double a = std::abs(coeff.to_complex());
        if (a > 0) growth = std::max(growth, std::pow(a, 1.0 / n));
    }
    if (growth <= 0) return 0.5;
    return 0.5 / growth;
}

DisjointnessReport disjointness_check(const std::vector<CurveGerm>& curves,
                                      double r_min, double r_max,
                                      int samples) {
    DisjointnessReport rep;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            if (curves[i].itinerary == curves[j].itinerary) {
                ++rep.skipped;
                continue;
            }
            DisjointnessReport::Pair pair;
            pair.i = i;
            pair.j = j;
            pair.separation_order =
                residual_order(curves[i].series - curves[j].series);
            double gap = std::numeric_limits<double>::infinity();
            for (int k = 0; k < samples; ++k) {
                double frac = samples > 1 ? (double)k / (samples - 1) : 0.0;
                double z = r_min * std::pow(r_max / r_min, frac);
                auto wi = eval_curve(curves[i].series,
                                     std::pow(z, 1.0 / curves[i].m));
                auto wj = eval_curve(curves[j].series,
                                     std::pow(z, 1.0 / curves[j].m));
                gap = std::min(gap, std::abs(wi - wj));
            }
            pair.min_gap = gap;
            rep.pairs.push_back(std::move(pair));
        }
    }
    return rep;
}

std::vector<PlaqueSample> emit_plaques(const SkewMap& f, const MarkovGraph& g,
                                       const ParryData& p, int count, int depth,
                                       double radius, std::uint64_t seed,
                                       const Rat& precision,
                                       int points_per_plaque) {
    std::vector<PlaqueSample> out;
    std::mt19937_64 gen(seed);
    for (int k = 0; k < count; ++k) {
        std::uint64_t subseed = gen();
        std::vector<int> word = sample_itinerary(g, p, depth, subseed);
        CurveGerm germ = itinerary_to_curve(f, g, word, precision);
        PlaqueSample plaque;
        plaque.itinerary = word;
        plaque.weight = cylinder_mass(g, p, word) / Rat((long)germ.m);
        plaque.radius = radius;
        plaque.radius_warning =
            radius > convergence_radius_heuristic(germ.series);
        const double tau = 6.28318530717958647692;
        for (int j = 0; j < points_per_plaque; ++j) {
            double theta = tau * j / points_per_plaque;
            std::complex<double> t = std::polar(radius, theta);
            PlaqueSample::Point pt;
            pt.t = t;
            pt.z = std::pow(t, (double)germ.m);
            pt.w = eval_curve(germ.series, t);
            plaque.points.push_back(pt);
        }
        out.push_back(std::move(plaque));
    }
    return out;
}

std::string plaques_to_csv(const std::vector<PlaqueSample>& plaques) {
    std::ostringstream os;
    os << "itinerary,weight_num,weight_den,t_re,t_im,z_re,z_im,w_re,w_im\n";
    os.precision(17);
    for (const auto& plaque : plaques) {
        std::string word;
        for (std::size_t i = 0; i < plaque.itinerary.size(); ++i) {
            if (i) word += '.';
            word += std::to_string(plaque.itinerary[i]);
        }
        for (const auto& pt : plaque.points) {
            os << word << ',' << plaque.weight.get_num().get_str() << ','
               << plaque.weight.get_den().get_str() << ',' << pt.t.real()
               << ',' << pt.t.imag() << ',' << pt.z.real() << ','
               << pt.z.imag() << ',' << pt.w.real() << ',' << pt.w.imag()
               << '\n';
        }
    }
    return os.str();
}

SkewMap base_change_map(const SkewMap& f, unsigned long k) {
    if (k < 1) throw input_error("base change order must be >= 1");
    std::vector<PuiseuxSeries> h;
    for (const auto& hj : f.h()) h.push_back(hj.unramify(k));
    return SkewMap(f.d(), f.c(), std::move(h), f.strict());
}

} // namespace berkdyn
