#include "laprat/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "laprat/detail/cxterm.hpp"
#include "laprat/errors.hpp"

namespace laprat {

namespace {

constexpr double kTol = kSignatureTol;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Rational realize(const CRational& cr) {
    Rational r;
    r.num.c.clear();
    r.den.c.clear();
    r.num.c.reserve(cr.num.c.size());
    r.den.c.reserve(cr.den.c.size());
    for (const auto& v : cr.num.c) r.num.c.push_back(v.real());
    for (const auto& v : cr.den.c) r.den.c.push_back(v.real());
    r.num.trim();
    r.den.trim();
    return r;
}

// Boundary contribution of one term at t = T:
//   int_T^inf e^{-lambda t} c t^k e^{rt} dt
//     = e^{-lambda T} * c e^{rT} sum_j C(k,j) T^{k-j} j! / (lambda-r)^{j+1}
// Contributions are accumulated per (delay, rate) in the pole-power basis
// coef[j] / (lambda-r)^{j+1}; keeping rates separate bounds every atom's
// denominator degree instead of piling the whole delay group onto one
// common denominator.
struct RateAcc {
    std::complex<double> rate;
    std::vector<std::complex<double>> coef;
};

struct DelayAcc {
    double delay;
    std::vector<RateAcc> rates;
};

void accumulate(std::vector<DelayAcc>& groups, double T,
                const std::vector<detail::CxTerm>& cx, double sign) {
    DelayAcc* g = nullptr;
    for (auto& cand : groups)
        if (std::abs(cand.delay - T) <= kTol) {
            g = &cand;
            break;
        }
    if (!g) {
        groups.push_back({T, {}});
        g = &groups.back();
    }
    for (const auto& t : cx) {
        RateAcc* ra = nullptr;
        for (auto& cand : g->rates)
            if (std::abs(cand.rate.real() - t.rate.real()) <= kTol &&
                std::abs(cand.rate.imag() - t.rate.imag()) <= kTol) {
                ra = &cand;
                break;
            }
        if (!ra) {
            g->rates.push_back({t.rate, {}});
            ra = &g->rates.back();
        }
        if (ra->coef.size() < static_cast<size_t>(t.tpow) + 1)
            ra->coef.resize(static_cast<size_t>(t.tpow) + 1);
        std::complex<double> scale = sign * t.coeff * std::exp(t.rate * T);
        for (int j = 0; j <= t.tpow; ++j) {
            double Tpow = (t.tpow == j) ? 1.0 : std::pow(T, t.tpow - j);
            ra->coef[static_cast<size_t>(j)] +=
                scale * binom(t.tpow, j) * Tpow * factorial(j);
        }
    }
}

CRational rate_rational(const RateAcc& ra) {
    int K = static_cast<int>(ra.coef.size()) - 1;
    CPoly pole{-ra.rate, std::complex<double>(1.0)};  // lambda - r
    std::vector<CPoly> polepows(static_cast<size_t>(K) + 2);
    polepows[0] = CPoly::one();
    for (int j = 1; j <= K + 1; ++j)
        polepows[static_cast<size_t>(j)] = polepows[static_cast<size_t>(j - 1)] * pole;
    CPoly num;
    for (int j = 0; j <= K; ++j)
        num += polepows[static_cast<size_t>(K - j)] * ra.coef[static_cast<size_t>(j)];
    return CRational{num, polepows[static_cast<size_t>(K) + 1]};
}

// Real atoms for one delay group: real rates directly, complex rates joined
// with their conjugate partners.
void emit_atoms(const DelayAcc& g, std::vector<TransformAtom>& out) {
    // Coefficients cancelled by a continuing piece leave dust; zero it out
    // against the group's magnitude so no spurious atoms appear.
    double gmax = 0.0;
    for (const auto& ra : g.rates)
        for (const auto& c : ra.coef) gmax = std::max(gmax, std::abs(c));
    std::vector<RateAcc> rates = g.rates;
    for (auto& ra : rates) {
        for (auto& c : ra.coef)
            if (std::abs(c) <= 1e-14 * gmax) c = 0.0;
        while (!ra.coef.empty() && std::abs(ra.coef.back()) == 0.0) ra.coef.pop_back();
    }
    std::vector<bool> used(rates.size(), false);
    for (size_t i = 0; i < rates.size(); ++i) {
        if (used[i] || rates[i].coef.empty()) continue;
        used[i] = true;
        CRational r = rate_rational(rates[i]);
        if (std::abs(rates[i].rate.imag()) > kTol) {
            for (size_t j = i + 1; j < rates.size(); ++j) {
                if (used[j] || rates[j].coef.empty()) continue;
                if (std::abs(rates[j].rate.real() - rates[i].rate.real()) <= kTol &&
                    std::abs(rates[j].rate.imag() + rates[i].rate.imag()) <= kTol) {
                    used[j] = true;
                    r = r + rate_rational(rates[j]);
                    break;
                }
            }
        }
        Rational rr = realize(r);
        if (rr.is_zero()) continue;
        out.push_back(make_atom(g.delay, rr));
    }
}

}  // namespace

TransformAtom make_atom(double delay, const Rational& r) {
    TransformAtom a;
    a.delay = delay;
    a.num = r.num;
    a.den = r.den;
    if (a.den.is_zero()) throw DivisionByZero("zero denominator in transform atom");
    double lead = a.den.c.back();
    for (auto& c : a.num.c) c /= lead;
    for (auto& c : a.den.c) c /= lead;
    return a;
}

Rational atom_rational(const TransformAtom& a) { return Rational{a.num, a.den}; }

TransformExpr transform(const PiecewiseExpPoly& f) {
    std::vector<DelayAcc> groups;
    const auto& pieces = f.pieces();
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].terms.empty()) continue;
        auto cx = detail::to_complex(pieces[i].terms);
        double a = pieces[i].start;
        double b = f.piece_end(i);
        accumulate(groups, a, cx, 1.0);
        if (!std::isinf(b)) accumulate(groups, b, cx, -1.0);
    }
    TransformExpr T;
    for (const auto& g : groups) emit_atoms(g, T.atoms);
    std::stable_sort(T.atoms.begin(), T.atoms.end(),
                     [](const TransformAtom& x, const TransformAtom& y) { return x.delay < y.delay; });
    T.sigma = f.growth_rate();
    return T;
}

double eval_transform(const TransformExpr& T, double lambda, double margin) {
    double threshold = (std::isinf(T.sigma) ? 0.0 : T.sigma) + margin;
    if (lambda <= threshold) throw DomainError("lambda below abscissa of convergence");
    double sum = 0.0;
    for (const auto& a : T.atoms) {
        double den = a.den.eval(lambda);
        if (std::abs(den) < 1e-300) throw DivisionByZero("transform denominator vanishes");
        sum += std::exp(-lambda * a.delay) * a.num.eval(lambda) / den;
    }
    return sum;
}

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double run(double lo, double hi, double flo, double fmid, double fhi, double whole,
                   double tol, int depth) {
            double m = 0.5 * (lo + hi);
            double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
            double flm = f(lm), frm = f(rm);
            double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            double right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return run(lo, m, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
                   run(m, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
        }
    } impl{fn};
    if (!(b > a)) return 0.0;
    double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return impl.run(a, b, fa, fm, fb, whole, tol, 48);
}

double numeric_transform(const PiecewiseExpPoly& f, double lambda, double tol) {
    double sigma = f.growth_rate();
    double threshold = (std::isinf(sigma) ? 0.0 : sigma) + 0.1;
    if (lambda <= threshold) throw DomainError("lambda below abscissa of convergence");
    const auto& pieces = f.pieces();
    double total = 0.0;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].terms.empty()) continue;
        double a = pieces[i].start;
        double b = f.piece_end(i);
        if (std::isinf(b)) {
            // Truncate where a crude integrand bound falls below tol/100.
            auto bound = [&](double t) {
                double s = 0.0;
                for (const auto& term : pieces[i].terms)
                    s += std::abs(term.coeff) * std::pow(std::max(t, 1.0), term.tpow) *
                         std::exp((term.rate - lambda) * t);
                return s;
            };
            b = a + 1.0;
            while (bound(b) / std::max(lambda - sigma, 0.1) > tol * 1e-2 && b < a + 1e4)
                b *= 2.0;
        }
        const auto& terms = pieces[i].terms;
        total += adaptive_simpson(
            [&](double t) { return std::exp(-lambda * t) * eval_terms(terms, t); }, a, b,
            tol / static_cast<double>(pieces.size() + 1));
    }
    return total;
}

std::vector<double> asymptotic_coeffs(const TransformExpr& T, int N) {
    std::vector<double> out(static_cast<size_t>(N) + 1, 0.0);
    // In u = 1/lambda: P/Q = u^shift * A(u)/B(u) with reversed coefficients.
    auto rev = [](const Poly& p, int deg, int upto) {
        std::vector<double> v(static_cast<size_t>(upto) + 1, 0.0);
        for (int i = 0; i <= upto; ++i)
            if (deg - i >= 0 && deg - i <= p.degree()) v[static_cast<size_t>(i)] = p.c[static_cast<size_t>(deg - i)];
        return v;
    };
    for (const auto& atom : T.atoms) {
        if (std::abs(atom.delay) > kTol) continue;
        Rational r = atom_rational(atom);
        if (r.is_zero()) continue;
        int dp = r.num.degree(), dq = r.den.degree();
        int shift = dq - dp;  // >= 1 for proper transforms
        std::vector<double> A = rev(r.num, dp, N + 1);
        std::vector<double> B = rev(r.den, dq, N + 1);
        std::vector<double> S(static_cast<size_t>(N) + 2, 0.0);
        for (int k = 0; k <= N + 1; ++k) {
            double acc = A[static_cast<size_t>(k)];
            for (int j = 1; j <= k; ++j) acc -= B[static_cast<size_t>(j)] * S[static_cast<size_t>(k - j)];
            S[static_cast<size_t>(k)] = acc / B[0];
        }
        for (int i = 0; i <= N; ++i) {
            int idx = i + 1 - shift;
            if (idx >= 0) out[static_cast<size_t>(i)] += S[static_cast<size_t>(idx)];
        }
    }
    return out;
}

std::vector<TransformAtom> product_atoms(const TransformExpr& a, const TransformExpr& b) {
    std::vector<TransformAtom> out;
    for (const auto& x : a.atoms)
        for (const auto& y : b.atoms)
            out.push_back(make_atom(x.delay + y.delay, atom_rational(x) * atom_rational(y)));
    return out;
}

namespace {

TransformExpr merge_atoms(std::vector<TransformAtom> atoms, double sigma) {
    // Cap the merged denominator degree; symbolic addition cross-multiplies
    // denominators, so unbounded merging blows up the degree and overflows
    // coefficients. Beyond the cap, extra atoms stay separate.
    constexpr int kMaxMergedDeg = 64;
    std::vector<std::pair<double, Rational>> groups;
    for (const auto& a : atoms) {
        bool found = false;
        for (auto& g : groups)
            if (std::abs(g.first - a.delay) <= kTol &&
                g.second.den.degree() + a.den.degree() <= kMaxMergedDeg) {
                g.second = g.second + atom_rational(a);
                found = true;
                break;
            }
        if (!found) groups.push_back({a.delay, atom_rational(a)});
    }
    TransformExpr T;
    T.sigma = sigma;
    for (const auto& g : groups)
        if (!g.second.is_zero()) T.atoms.push_back(make_atom(g.first, g.second));
    std::sort(T.atoms.begin(), T.atoms.end(),
              [](const TransformAtom& x, const TransformAtom& y) { return x.delay < y.delay; });
    return T;
}

}  // namespace

TransformExpr mul(const TransformExpr& a, const TransformExpr& b) {
    return merge_atoms(product_atoms(a, b), std::max(a.sigma, b.sigma));
}

TransformExpr sub(const TransformExpr& a, const TransformExpr& b) {
    std::vector<TransformAtom> atoms = a.atoms;
    for (auto atom : b.atoms) {
        for (auto& c : atom.num.c) c = -c;
        atoms.push_back(atom);
    }
    return merge_atoms(std::move(atoms), std::max(a.sigma, b.sigma));
}

}  // namespace laprat
