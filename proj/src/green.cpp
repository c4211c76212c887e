#include "berkdyn/green.hpp"

#include "berkdyn/errors.hpp"

namespace berkdyn {

GreenValue g_na(const SkewMap& f, const BerkPoint& x, int budget) {
    ExtRat trap = f.rho0();
    Rat scale(1); // (d/c)^n
    Rat ratio = Rat(f.d()) / Rat(f.c());
    ratio.canonicalize();
    std::vector<BerkPoint> history;
    BerkPoint y = x;
    for (int n = 0; n <= budget; ++n) {
        if (n > 0) {
            y = f.apply_point(y);
            scale *= ratio;
        }
        bool norm_known = true;
        ExtRat ne;
        try {
            ne = y.norm_exponent();
        } catch (const IndeterminateOrder&) {
            norm_known = false;
        }
        if (n == 0 && norm_known && ne <= ExtRat(0))
            throw input_error("g_na requires a point of the open unit ball");
        if (norm_known && ne < trap) {
            GreenValue out;
            out.kind = GreenValue::Kind::Value;
            out.value = -(scale * ne.finite());
            out.steps = n;
            return out;
        }
        if (y.is_certified()) {
            for (const auto& prev : history) {
                if (prev == y) {
                    GreenValue out;
                    out.kind = GreenValue::Kind::MinusInfinity;
                    out.steps = n;
                    return out;
                }
            }
        }
        history.push_back(y);
    }
    GreenValue out;
    out.kind = GreenValue::Kind::Unresolved;
    out.steps = budget;
    return out;
}

GreenCheckReport functional_equation_check(const SkewMap& f,
                                           const std::vector<BerkPoint>& xs,
                                           int budget) {
    GreenCheckReport rep;
    Rat cd = Rat(f.c()) / Rat(f.d());
    cd.canonicalize();
    for (const auto& x : xs) {
        GreenValue a = g_na(f, x, budget);
        GreenValue b = g_na(f, f.apply_point(x), budget);
        if (a.kind == GreenValue::Kind::Unresolved
            || b.kind == GreenValue::Kind::Unresolved) {
            ++rep.unresolved;
            continue;
        }
        ++rep.resolved;
        if (a.kind != b.kind) {
            ++rep.violations;
            continue;
        }
        if (a.kind == GreenValue::Kind::Value && b.value != cd * a.value)
            ++rep.violations;
    }
    return rep;
}

} // namespace berkdyn
