#pragma once

#include <optional>
#include <string>
#include <vector>

#include "berkdyn/berk.hpp"
#include "berkdyn/newton.hpp"
#include "berkdyn/series.hpp"

namespace berkdyn {

/**
 * A critical branch c_i(z) of f: a Puiseux parametrization of a component of
 * the critical set {jac_w = 0}, with its order J (multiplicity of c_i as a
 * root of jac_w), the integer ν = q(d/(1+J)), and its forward-orbit fate.
 */
struct CriticalBranch {
    PuiseuxSeries series;
    int J = 1;
    unsigned long nu = 1;
    bool in_crit_plus = false;

    enum class Fate { Escapes, InK, Unresolved };
    Fate fate = Fate::Unresolved;
    /// Escapes: first step with norm exponent below the trapping exponent.
    /// InK: period of the certified periodic orbit. Unresolved: the budget.
    int steps = 0;
    std::string witness;
};

/**
 * An open or closed ball inside the Berkovich unit ball, described by its
 * type-2 boundary point and a center series pinning the tangent direction
 * (distinct balls can share the boundary point, e.g. the two open residue
 * directions at one type-2 point).
 */
struct Ball {
    enum class Kind { Open, Closed };
    BerkPoint boundary = BerkPoint::gauss();
    PuiseuxSeries direction;
    Kind kind = Kind::Closed;
    int level = 0;
    bool contains_critical = false;

    const ExtRat& t() const { return boundary.t(); }
    std::string str() const;
};

/// One Galois orbit of rigid preimages, with the local degree data.
struct PreimageOrbit {
    PuiseuxSeries rep;     // canonical (lex-least) representative
    unsigned long m = 1;   // orbit size = multiplicity of the representative
    long r = 1;            // ramification index of f at the orbit
    long e = 1;            // residue-field/base contribution d·m_i/m(ψ)
};

struct PreimageFiber {
    std::vector<PuiseuxRoot> roots; // all roots over 𝕃, with multiplicity
    std::vector<PreimageOrbit> orbits;
};

/**
 * The superattracting skew product f(z, w) = (z^d, w^c + Σ_{j<c} h_j(z) w^j),
 * 2 ≤ c, with h_j(0) = 0. Strict mode additionally enforces c < d (the
 * small-relative-degree regime every 𝒦/measure theorem relies on).
 */
class SkewMap {
public:
    SkewMap(long d, long c, std::vector<PuiseuxSeries> h, bool strict = true);

    long d() const { return d_; }
    long c() const { return c_; }
    const std::vector<PuiseuxSeries>& h() const { return h_; }
    Mode mode() const { return mode_; }
    bool strict() const { return strict_; }

    /// f_⋄(φ) = φ(z^{1/d})^c + Σ h_j(z^{1/d}) φ(z^{1/d})^j.
    PuiseuxSeries apply_rigid(const PuiseuxSeries& phi) const;

    /// w^c + Σ h_j w^j − ψ(z^d), the fiber equation over ψ.
    SeriesPoly fiber_poly(const PuiseuxSeries& psi) const;

    /// jac_w(f) = c w^{c−1} + Σ j h_j(z) w^{j−1} as a polynomial in w.
    SeriesPoly jac_w() const;

    /// Critical branches with J, ν, Crit⁺ flags and orbit fate (memoized).
    const std::vector<CriticalBranch>& critical_data(
        const Rat& precision = Rat(64)) const;

    /// Trapping exponent t_ρ: ρ_0 = e^{-t_ρ} = max_j |h_j|^{1/(c−j)}.
    ExtRat rho0() const;

    /// −log|jac(f)(x)| = (d−1) + Σ_i J_i·min(ord(center − c_i), t).
    ExtRat jac_exponent(const BerkPoint& x) const;

    /// The induced map on Berkovich points (Jacobian formula for the radius).
    BerkPoint apply_point(const BerkPoint& x) const;

    /// Rigid fiber over ψ: roots over 𝕃 and the Galois-orbit counting data
    /// with Σ r_i e_i = c·d.
    PreimageFiber preimages_rigid(const PuiseuxSeries& psi,
                                  const Rat& precision) const;

    /// Connected components of f_⋄^{-1}(B), as balls mapping exactly onto B.
    std::vector<Ball> preimage_ball(const Ball& B) const;

private:
    long d_, c_;
    std::vector<PuiseuxSeries> h_;
    Mode mode_;
    bool strict_;
    mutable std::vector<CriticalBranch> crit_;
    mutable bool crit_ready_ = false;
};

} // namespace berkdyn
