#include "laprat/counterex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "laprat/errors.hpp"
#include "laprat/identify.hpp"

namespace laprat {

namespace {

double pw(double x, int k) { return std::pow(x, k); }

double param(const PresetId& id, const std::string& key, double fallback) {
    auto it = id.params.find(key);
    return it == id.params.end() ? fallback : it->second;
}

bool has_param(const PresetId& id, const std::string& key) {
    return id.params.count(key) > 0;
}

ExpPolyTerm expterm(double coeff, double rate) { return {coeff, 0, rate, 0.0, Trig::None}; }

PiecewiseExpPoly from_pieces(std::vector<Piece> pieces) {
    return PiecewiseExpPoly(std::move(pieces));
}

// Bisect g on a bracket where it is monotone, then polish with Newton.
double refine_root(const std::function<double(double)>& g,
                   const std::function<double(double)>& dg, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((glo <= 0) == (gm <= 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        double d = dg(x);
        if (d == 0.0) break;
        double step = g(x) / d;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

std::optional<Family> family_from_string(const std::string& s) {
    if (s == "thm11a") return Family::Thm11a;
    if (s == "thm11b") return Family::Thm11b;
    if (s == "thm11c") return Family::Thm11c;
    if (s == "thm11d") return Family::Thm11d;
    if (s == "thm12a") return Family::Thm12a;
    if (s == "thm12b") return Family::Thm12b;
    if (s == "expfam") return Family::ExpFam;
    if (s == "const_tail") return Family::ConstTail;
    return std::nullopt;
}

std::string family_to_string(Family f) {
    switch (f) {
        case Family::Thm11a: return "thm11a";
        case Family::Thm11b: return "thm11b";
        case Family::Thm11c: return "thm11c";
        case Family::Thm11d: return "thm11d";
        case Family::Thm12a: return "thm12a";
        case Family::Thm12b: return "thm12b";
        case Family::ExpFam: return "expfam";
        case Family::ConstTail: return "const_tail";
    }
    return "?";
}

PiecewiseExpPoly exp_family_member(double a, double T, double c) {
    return from_pieces({{0.0, {expterm(1.0, -a)}}, {T, {expterm(c * std::exp(a * T), -a)}}});
}

PresetPair gen_preset(const PresetId& id) {
    int n = static_cast<int>(param(id, "n", 2));
    int m = static_cast<int>(param(id, "m", 1));
    switch (id.family) {
        case Family::Thm11a: {
            double c = param(id, "c", 0.75);
            if (!(c > 0.5 && c < 1.0)) throw BadParams("c must lie in (1/2, 1)");
            double T1 = -std::log(1.0 - c);
            double T2 = std::log(2.0 * c);
            PiecewiseExpPoly p = from_pieces({{0.0, {expterm(1.0, -1.0)}},
                                              {T1, {expterm(c * std::exp(T1), -1.0)}},
                                              {T1 + T2, {expterm(0.5, 0.0)}}});
            PiecewiseExpPoly q = from_pieces(
                {{0.0, {expterm(1.0, -1.0)}}, {std::log(2.0), {expterm(0.5, 0.0)}}});
            return {p, q, 2, 1};
        }
        case Family::Thm11b: {
            PiecewiseExpPoly p = PiecewiseExpPoly::constant(1.0);
            PiecewiseExpPoly q = from_pieces({{0.0, {expterm(1.0, 0.0)}}, {1.0, {}}});
            return {p, q, n, m};
        }
        case Family::Thm11c: {
            PiecewiseExpPoly p = from_pieces({{0.0, {expterm(1.0, 1.0)}}});
            PiecewiseExpPoly q = from_pieces(
                {{0.0, {expterm(1.0, 1.0)}}, {1.0, {expterm(std::exp(-1.0) - 1.0, 1.0)}}});
            return {p, q, 2, 1};
        }
        case Family::Thm11d: {
            double T = std::log(2.0) - 0.5 * std::log(3.0);
            PiecewiseExpPoly p = from_pieces({{0.0, {expterm(1.0, 1.0)}}});
            PiecewiseExpPoly q = from_pieces(
                {{0.0, {expterm(1.0, 1.0)}}, {T, {expterm(-1.0 / std::sqrt(3.0), 0.0)}}});
            return {p, q, 3, 1};
        }
        case Family::Thm12a: {
            ExpPolyTerm sine{1.0, 0, 0.0, 1.0, Trig::Sin};
            PiecewiseExpPoly p = from_pieces({{0.0, {sine}}});
            PiecewiseExpPoly q = from_pieces({{0.0, {sine}}, {2.0 * std::acos(-1.0), {}}});
            return {p, q, n, m};
        }
        case Family::Thm12b: {
            ExpPolyTerm ramp{1.0, 1, 0.0, 0.0, Trig::None};
            PiecewiseExpPoly p = from_pieces({{0.0, {ramp}}});
            PiecewiseExpPoly q = from_pieces({{0.0, {ramp}}, {1.0, {ramp, expterm(-2.0, 0.0)}}});
            return {p, q, 2, 1};
        }
        case Family::ExpFam: {
            double a = param(id, "a", 1.0);
            double T = param(id, "T", std::log(3.0));
            if (a == 0.0 || T <= 0.0) throw BadParams("need a != 0 and T > 0");
            double c;
            if (has_param(id, "c")) {
                c = param(id, "c", 0.0);
            } else {
                std::vector<Root> roots = solve_c(n, m, a, T);
                auto it = std::find_if(roots.begin(), roots.end(),
                                       [](const Root& r) { return !r.trivial; });
                if (it == roots.end())
                    throw BadParams("no nontrivial c for these parameters");
                c = it->value;
            }
            PiecewiseExpPoly q = from_pieces({{0.0, {expterm(1.0, -a)}}});
            return {exp_family_member(a, T, c), q, n, m};
        }
        case Family::ConstTail: {
            double a = param(id, "a", 1.0);
            if (a == 0.0) throw BadParams("need a != 0");
            if (a < 0.0 && !(n % 2 == 1 && m % 2 == 1))
                throw BadParams("a < 0 requires n and m odd");
            SpecialTimes st = special_times(n, m, a);
            double T = a > 0.0 ? *st.T2 : *st.T1;
            double tail = a > 0.0 ? st.b0 : -st.b0;
            PiecewiseExpPoly p =
                from_pieces({{0.0, {expterm(1.0, -a)}}, {T, {expterm(tail, 0.0)}}});
            PiecewiseExpPoly q = from_pieces({{0.0, {expterm(1.0, -a)}}});
            return {p, q, n, m};
        }
    }
    throw BadParams("unknown preset family");
}

std::vector<Root> solve_c(int n, int m, double a, double T) {
    if (!(n > m && m >= 1 && std::gcd(n, m) == 1))
        throw AssumptionViolated("exponents must satisfy n > m >= 1 with gcd(n,m) = 1");
    double rhs = std::exp(-n * a * T) - std::exp(-m * a * T);
    auto g = [&](double x) { return pw(x, n) - pw(x, m) - rhs; };
    auto dg = [&](double x) { return n * pw(x, n - 1) - m * pw(x, m - 1); };
    ShapeReport sh = x0_and_shape(n, m);
    double x0 = sh.x0;
    double hi = std::pow(1.0 + std::abs(rhs), 1.0 / m) + 1.0;
    double lo = -(std::pow(1.0 + std::abs(rhs), 1.0 / (n - m)) + 1.0);
    std::vector<double> cuts;
    switch (sh.parity) {
        case Parity::BothOdd: cuts = {lo, -x0, x0, hi}; break;
        case Parity::NOddMEven: cuts = {lo, 0.0, x0, hi}; break;
        case Parity::NEvenMOdd: cuts = {lo, x0, hi}; break;
    }
    std::vector<double> found;
    double gscale = std::max({std::abs(g(lo)), std::abs(g(hi)), 1.0});
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double s = cuts[i], e = cuts[i + 1];
        double gs = g(s), ge = g(e);
        if (std::abs(gs) <= 1e-12 * gscale) found.push_back(s);
        if (std::abs(ge) <= 1e-12 * gscale) found.push_back(e);
        if ((gs < 0) != (ge < 0)) found.push_back(refine_root(g, dg, s, e));
    }
    std::sort(found.begin(), found.end());
    std::vector<Root> out;
    double ctrivial = std::exp(-a * T);
    for (double r : found) {
        if (!out.empty() && std::abs(r - out.back().value) <= 1e-8 * (1.0 + std::abs(r))) {
            out.back().multiplicity = 2;
            continue;
        }
        Root root;
        root.value = r;
        root.trivial = std::abs(r - ctrivial) <= 1e-9 * (1.0 + std::abs(ctrivial));
        // A root sitting on a critical point of x^n - x^m is a double root.
        if (std::abs(dg(r)) <= 1e-7 * std::max(1.0, std::abs(dg(hi)) / 100.0) &&
            (std::abs(r - x0) <= 1e-7 || std::abs(r + x0) <= 1e-7))
            root.multiplicity = 2;
        out.push_back(root);
    }
    return out;
}

SpecialTimes special_times(int n, int m, double a) {
    if (!(n > m && m >= 1 && std::gcd(n, m) == 1) || a == 0.0)
        throw AssumptionViolated("need n > m >= 1 co-prime and a != 0");
    SpecialTimes st;
    st.b0 = x0_and_shape(n, m).x0;
    if (a > 0.0) {
        st.T2 = std::log(static_cast<double>(n) / m) / ((n - m) * a);
    } else if (n % 2 == 1 && m % 2 == 1) {
        double lhs = pw(st.b0, m) - pw(st.b0, n);
        auto g = [&](double t) { return std::exp(-n * a * t) - std::exp(-m * a * t) - lhs; };
        auto dg = [&](double t) {
            return -n * a * std::exp(-n * a * t) + m * a * std::exp(-m * a * t);
        };
        double hi = 1.0;
        while (g(hi) < 0.0) hi *= 2.0;
        st.T1 = refine_root(g, dg, 0.0, hi);
    }
    return st;
}

FamilyClassification family_classify(int n, int m, double a) {
    if (!(n > m && m >= 1 && std::gcd(n, m) == 1) || a == 0.0)
        throw AssumptionViolated("need n > m >= 1 co-prime and a != 0");
    FamilyClassification out;
    out.includes_negatives = (n - m) % 2 == 0;
    SpecialTimes st = special_times(n, m, a);
    std::string rate = std::to_string(-a);
    std::string base = "exp(" + rate + "*t) with tail c*e^{aT}*exp(" + rate +
                       "*t) from T, c^n-c^m=e^{-naT}-e^{-maT}";
    if (a < 0.0 && n % 2 == 1 && m % 2 == 0) {
        out.kase = FamilyCase::SingletonF;
        out.members = {"only the exponential itself"};
    } else if (a > 0.0) {
        out.kase = FamilyCase::ExpPlusPosConstTail;
        out.members = {base, "constant tail +" + std::to_string(st.b0) + " from T2=" +
                                 std::to_string(*st.T2)};
    } else if (n % 2 == 1 && m % 2 == 1) {
        out.kase = FamilyCase::ExpPlusNegConstTail;
        out.members = {base, "constant tail -" + std::to_string(st.b0) + " from T1=" +
                                 std::to_string(*st.T1)};
    } else {
        out.kase = FamilyCase::ExpOnly;
        out.members = {base};
    }
    return out;
}

}  // namespace laprat
