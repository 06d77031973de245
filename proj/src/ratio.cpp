#include "laprat/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "laprat/errors.hpp"
#include "laprat/laplace.hpp"

namespace laprat {

namespace {

constexpr double kTol12 = kSignatureTol;

double finite_or(double v, double fallback) { return std::isinf(v) ? fallback : v; }

}  // namespace

AssumptionReport assumptions_check(const PiecewiseExpPoly& p, int n, int m) {
    AssumptionReport r;
    r.a1_ok = !p.pieces().front().terms.empty();
    r.a2_ok = std::gcd(n, m) == 1;
    r.a3_ok = n > m;
    if (!r.a1_ok) r.details += "support does not reach down to 0; ";
    if (!r.a2_ok) r.details += "n and m are not co-prime; ";
    if (!r.a3_ok) r.details += "n must exceed m; ";
    return r;
}

double ratio_H(const PiecewiseExpPoly& p, int n, int m, double lambda) {
    TransformExpr Tn = transform(pow(p, n));
    TransformExpr Tm = transform(pow(p, m));
    double num = eval_transform(Tn, lambda);
    double den = eval_transform(Tm, lambda);
    if (std::abs(den) < 1e-300) throw DivisionByZero("denominator transform vanishes");
    return num / den;
}

EqualityReport h_equal(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q, int n, int m,
                       double tol) {
    EqualityReport rep;
    rep.assumptions = assumptions_check(p, n, m);
    {
        AssumptionReport aq = assumptions_check(q, n, m);
        rep.assumptions.a1_ok = rep.assumptions.a1_ok && aq.a1_ok;
        if (!aq.a1_ok) rep.assumptions.details += "q: support does not reach down to 0; ";
    }
    if (!rep.assumptions.a2_ok || !rep.assumptions.a3_ok)
        throw AssumptionViolated(rep.assumptions.details);

    TransformExpr Pn = transform(pow(p, n));
    TransformExpr Pm = transform(pow(p, m));
    TransformExpr Qn = transform(pow(q, n));
    TransformExpr Qm = transform(pow(q, m));

    // Exact path: distinct e^{-lambda T} factors are independent over
    // rational functions, so the difference vanishes iff each delay group's
    // numerator does after clearing denominators.
    std::vector<TransformAtom> atoms = product_atoms(Pn, Qm);
    for (auto a : product_atoms(Pm, Qn)) {
        for (auto& c : a.num.c) c = -c;
        atoms.push_back(a);
    }
    std::vector<std::pair<double, std::vector<TransformAtom>>> groups;
    for (const auto& a : atoms) {
        bool found = false;
        for (auto& g : groups)
            if (std::abs(g.first - a.delay) <= kTol12) {
                g.second.push_back(a);
                found = true;
                break;
            }
        if (!found) groups.push_back({a.delay, {a}});
    }
    rep.max_exact_residual = 0.0;
    for (const auto& [delay, group] : groups) {
        // Probe the cleared-denominator numerator at enough points to pin a
        // polynomial of its degree; scalar evaluation avoids the coefficient
        // blow-up of forming the product polynomials explicitly.
        int deg = 0;
        for (const auto& a : group) deg += std::max(a.den.degree(), 0);
        for (const auto& a : group) deg = std::max(deg, a.num.degree());
        int probes = std::min(deg + 2, 48);
        // Coefficient noise in the atoms does not shrink when a factor
        // happens to be small at the probe point, so scale each probe by an
        // absolute-coefficient magnitude bound rather than the actual values.
        auto abs_eval = [](const Poly& p, double x) {
            double s = 0.0, xp = 1.0;
            for (double c : p.c) {
                s += std::abs(c) * xp;
                xp *= x;
            }
            return s;
        };
        double residual = 0.0;
        for (int k = 0; k < probes; ++k) {
            double lam = 1.05 + 2.9 * (k + 0.5) / probes;
            double sum = 0.0, scale = 0.0;
            for (size_t i = 0; i < group.size(); ++i) {
                double term = group[i].num.eval(lam);
                double mag = abs_eval(group[i].num, lam);
                for (size_t j = 0; j < group.size(); ++j)
                    if (j != i) {
                        term *= group[j].den.eval(lam);
                        mag *= abs_eval(group[j].den, lam);
                    }
                sum += term;
                scale = std::max(scale, mag);
            }
            if (scale > 0.0) residual = std::max(residual, std::abs(sum) / scale);
        }
        rep.exact_residuals[delay] = residual;
        rep.max_exact_residual = std::max(rep.max_exact_residual, residual);
    }

    // Numeric path: relative residual of the cross products on a lambda grid.
    double base = std::max(std::max(finite_or(Pn.sigma, 0.0), finite_or(Pm.sigma, 0.0)),
                           std::max(finite_or(Qn.sigma, 0.0), finite_or(Qm.sigma, 0.0)));
    rep.max_grid_residual = 0.0;
    // The evaluation noise of a transform scales with the summed atom
    // magnitudes, not the (possibly cancelled) value, so measure the grid
    // residual against that bound.
    auto eval_mag = [](const TransformExpr& T, double lambda) {
        double s = 0.0;
        for (const auto& a : T.atoms) {
            double nmag = 0.0, lp = 1.0;
            for (double c : a.num.c) {
                nmag += std::abs(c) * lp;
                lp *= lambda;
            }
            s += std::exp(-lambda * a.delay) * nmag / std::abs(a.den.eval(lambda));
        }
        return s;
    };
    const int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
        double lambda = base + 1.0 + 59.0 * (i + 0.5) / kGrid;
        double lhs = eval_transform(Pn, lambda) * eval_transform(Qm, lambda);
        double rhs = eval_transform(Pm, lambda) * eval_transform(Qn, lambda);
        double scale = std::max({std::abs(lhs), std::abs(rhs),
                                 eval_mag(Pn, lambda) * eval_mag(Qm, lambda),
                                 eval_mag(Pm, lambda) * eval_mag(Qn, lambda), 1e-300});
        double rel = std::abs(lhs - rhs) / scale;
        if (rel > rep.max_grid_residual) {
            rep.max_grid_residual = rel;
            rep.witness_lambda = lambda;
        }
    }

    bool exact_ok = rep.max_exact_residual <= tol;
    bool grid_ok = rep.max_grid_residual <= tol;
    if (exact_ok && grid_ok) {
        rep.verdict = Verdict::Equal;
        rep.witness_lambda.reset();
    } else if (!exact_ok && !grid_ok) {
        rep.verdict = Verdict::Unequal;
    } else {
        rep.verdict = Verdict::Indeterminate;
    }
    return rep;
}

std::vector<double> conv_residual(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q,
                                  int n, int m, const std::vector<double>& xs) {
    PiecewiseExpPoly pn = pow(p, n), pm = pow(p, m);
    PiecewiseExpPoly qn = pow(q, n), qm = pow(q, m);
    auto convolve = [](const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double x) {
        std::vector<double> cuts{0.0, x};
        for (const auto& piece : f.pieces())
            if (piece.start > 0.0 && piece.start < x) cuts.push_back(piece.start);
        for (const auto& piece : g.pieces())
            if (piece.start > 0.0 && piece.start < x) cuts.push_back(x - piece.start);
        std::sort(cuts.begin(), cuts.end());
        double sum = 0.0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            sum += adaptive_simpson([&](double s) { return f(s) * g(x - s); }, cuts[i],
                                    cuts[i + 1], 1e-11);
        return sum;
    };
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(convolve(pn, qm, x) - convolve(pm, qn, x));
    return out;
}

XiReport xi_check(const PiecewiseExpPoly& F, const PiecewiseExpPoly& G,
                  const PiecewiseExpPoly& H, double T, int n, int m,
                  std::vector<double> lambdas) {
    if (!F.vanishes_from(T))
        throw NonVanishingHead("head function does not vanish past the junction");
    TransformExpr Fn = transform(pow(F, n)), Fm = transform(pow(F, m));
    TransformExpr Gn = transform(pow(G, n)), Gm = transform(pow(G, m));
    TransformExpr Hn = transform(pow(H, n)), Hm = transform(pow(H, m));
    // Combine symbolically first so that exactly cancelling delay groups
    // drop out before evaluation.
    TransformExpr xi = sub(mul(Fm, sub(Gn, Hn)), mul(Fn, sub(Gm, Hm)));
    TransformExpr inner = sub(mul(Hn, Gm), mul(Gn, Hm));
    std::sort(lambdas.begin(), lambdas.end());
    XiReport rep;
    double prev = kInf;
    for (double lambda : lambdas) {
        double lhs = eval_transform(xi, lambda);
        double rhs = std::exp(-lambda * T) * eval_transform(inner, lambda);
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / scale);
        double scaled = std::abs(lhs) * std::exp(lambda * T);
        if (scaled > prev + 1e-12 * (1.0 + prev)) rep.decay_monotone = false;
        prev = scaled;
    }
    return rep;
}

}  // namespace laprat
