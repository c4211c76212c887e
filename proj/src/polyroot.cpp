#include "berkdyn/polyroot.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "berkdyn/errors.hpp"

namespace berkdyn {

namespace {

bool poly_is_zero(const CoeffPoly& p) {
    for (const auto& c : p)
        if (!c.is_zero()) return false;
    return true;
}

CoeffPoly poly_trim(CoeffPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

int poly_deg(const CoeffPoly& p) { return (int)p.size() - 1; }

CoeffPoly poly_scale(const CoeffPoly& p, const Coefficient& s) {
    CoeffPoly out = p;
    for (auto& c : out) c = c * s;
    return out;
}

CoeffPoly poly_monic(const CoeffPoly& p) {
    return poly_scale(p, Coefficient(Rat(1)) / p.back());
}

CoeffPoly poly_sub(const CoeffPoly& a, const CoeffPoly& b) {
    CoeffPoly out = a;
    if (b.size() > out.size()) out.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = out[i] - b[i];
    return poly_trim(out);
}

CoeffPoly poly_mul(const CoeffPoly& a, const CoeffPoly& b) {
    if (a.empty() || b.empty()) return {};
    CoeffPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    return poly_trim(out);
}

/// Euclidean remainder over the exact field.
CoeffPoly poly_rem(CoeffPoly a, const CoeffPoly& b) {
    a = poly_trim(a);
    while ((int)a.size() >= (int)b.size() && !a.empty()) {
        Coefficient q = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[off + i] = a[off + i] - q * b[i];
        a = poly_trim(a);
    }
    return a;
}

CoeffPoly poly_quot(CoeffPoly a, const CoeffPoly& b) {
    a = poly_trim(a);
    if (a.size() < b.size()) return {};
    CoeffPoly q(a.size() - b.size() + 1);
    while ((int)a.size() >= (int)b.size() && !a.empty()) {
        Coefficient c = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[off + i] = a[off + i] - c * b[i];
        a = poly_trim(a);
    }
    return poly_trim(q);
}

CoeffPoly poly_gcd(CoeffPoly a, CoeffPoly b) {
    a = poly_trim(a);
    b = poly_trim(b);
    while (!b.empty()) {
        CoeffPoly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    return poly_monic(a);
}

/// Yun's square-free decomposition: returns (factor, multiplicity) pairs.
std::vector<std::pair<CoeffPoly, int>> squarefree_decompose(const CoeffPoly& p) {
    std::vector<std::pair<CoeffPoly, int>> out;
    CoeffPoly a = poly_monic(poly_trim(p));
    CoeffPoly d = poly_derivative(a);
    CoeffPoly g = poly_gcd(a, d);
    if (poly_deg(g) == 0) {
        out.emplace_back(a, 1);
        return out;
    }
    CoeffPoly b = poly_quot(a, g);
    CoeffPoly c = poly_quot(d, g);
    int k = 1;
    while (poly_deg(b) > 0) {
        CoeffPoly w = poly_sub(c, poly_derivative(b));
        CoeffPoly f = poly_gcd(b, w);
        if (poly_deg(f) > 0) out.emplace_back(f, k);
        b = poly_quot(b, f);
        c = poly_quot(w, f);
        ++k;
    }
    return out;
}

/// Durand–Kerner root finder for a monic polynomial in complex doubles.
std::vector<std::complex<double>> durand_kerner(
    const std::vector<std::complex<double>>& coeffs) {
    int n = (int)coeffs.size() - 1;
    std::vector<std::complex<double>> x(n);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        x[i] = acc;
    }
    auto eval = [&](std::complex<double> v) {
        std::complex<double> r = 0;
        for (int i = n; i >= 0; --i) r = r * v + coeffs[i];
        return r;
    };
    for (int it = 0; it < 2000; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> num = eval(x[i]);
            std::complex<double> den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= x[i] - x[j];
            std::complex<double> step = num / den;
            x[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15) break;
    }
    return x;
}

std::vector<std::complex<double>> to_complex_monic(const CoeffPoly& p) {
    std::vector<std::complex<double>> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = p[i].to_complex();
    std::complex<double> lead = c.back();
    for (auto& v : c) v /= lead;
    return c;
}

/// Exact roots of a square-free factor, or nullopt if it does not split.
std::optional<std::vector<Coefficient>> squarefree_roots_exact(
    const CoeffPoly& f) {
    int n = poly_deg(f);
    std::vector<Coefficient> roots;
    if (n == 1) {
        roots.push_back(-(f[0] / f[1]));
        return roots;
    }
    if (n == 2) {
        Coefficient a = f[2], b = f[1], c = f[0];
        Coefficient disc = b * b - Coefficient(Rat(4)) * a * c;
        if (auto s = disc.sqrt_exact()) {
            Coefficient two_a = Coefficient(Rat(2)) * a;
            roots.push_back((-b + *s) / two_a);
            roots.push_back((-b - *s) / two_a);
            return roots;
        }
        return std::nullopt;
    }
    // Numeric localization + exact reconstruction + exact verification.
    auto approx = durand_kerner(to_complex_monic(f));
    for (const auto& r : approx) {
        auto re = reconstruct_rational(r.real());
        auto im = reconstruct_rational(r.imag());
        if (!re || !im) return std::nullopt;
        Coefficient cand(*re, *im);
        if (!poly_eval(f, cand).is_zero()) return std::nullopt;
        roots.push_back(cand);
    }
    std::sort(roots.begin(), roots.end(),
              [](const Coefficient& a, const Coefficient& b) {
                  return lex_less(a, b);
              });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if ((int)roots.size() != n) return std::nullopt;
    return roots;
}

std::string poly_to_string(const CoeffPoly& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += p[i].str();
    }
    return s + "]";
}

} // namespace

Coefficient poly_eval(const CoeffPoly& p, const Coefficient& x) {
    Coefficient r = x.mode() == Mode::Numeric
                        ? Coefficient(std::complex<double>(0.0))
                        : Coefficient(Rat(0));
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

CoeffPoly poly_derivative(const CoeffPoly& p) {
    CoeffPoly out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(p[i] * Coefficient(Rat((long)i)));
    return poly_trim(out);
}

std::optional<Rat> reconstruct_rational(double x, long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    double scale = std::max(1.0, std::abs(x));
    // continued fraction convergents
    long p0 = 1, q0 = 0;
    long p1 = (long)std::floor(x), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        double approx = (double)p1 / (double)q1;
        if (std::abs(x - approx) < tol * scale) {
            Rat r(p1, q1);
            r.canonicalize();
            return r;
        }
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long a = (long)std::floor(inv);
        frac = inv - std::floor(inv);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    if (std::abs(x - (double)p1 / (double)q1) < tol * scale) {
        Rat r(p1, q1);
        r.canonicalize();
        return r;
    }
    return std::nullopt;
}

std::vector<std::pair<Coefficient, int>> coeff_poly_roots(const CoeffPoly& p_in) {
    CoeffPoly p = poly_trim(p_in);
    if (p.empty()) throw input_error("root finding on the zero polynomial");
    if (poly_deg(p) == 0) return {};
    std::vector<std::pair<Coefficient, int>> out;

    if (p[0].mode() == Mode::Numeric || p.back().mode() == Mode::Numeric) {
        auto approx = durand_kerner(to_complex_monic(p));
        std::sort(approx.begin(), approx.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      if (a.real() != b.real()) return a.real() < b.real();
                      return a.imag() < b.imag();
                  });
        for (const auto& r : approx) {
            if (!out.empty()
                && std::abs(out.back().first.to_complex() - r) < 1e-6) {
                out.back().second += 1;
            } else {
                out.emplace_back(Coefficient(r), 1);
            }
        }
        return out;
    }

    for (const auto& [f, mult] : squarefree_decompose(p)) {
        auto roots = squarefree_roots_exact(f);
        if (!roots)
            throw SplittingFieldRequired(poly_to_string(f));
        for (const auto& r : *roots) out.emplace_back(r, mult);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    return out;
}

} // namespace berkdyn
