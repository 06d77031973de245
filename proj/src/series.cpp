#include "laprat/series.hpp"

#include <cmath>

#include "laprat/errors.hpp"

namespace laprat {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

PowerSeries power_coeffs(const PowerSeries& s, int k) {
    int N = s.order();
    std::vector<double> acc(static_cast<size_t>(N) + 1, 0.0);
    acc[0] = 1.0;
    for (int rep = 0; rep < k; ++rep) {
        std::vector<double> next(static_cast<size_t>(N) + 1, 0.0);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= i; ++j) next[static_cast<size_t>(i)] += acc[static_cast<size_t>(j)] * s[i - j];
        acc = std::move(next);
    }
    return PowerSeries{std::move(acc)};
}

ObstructionLedger obstruction_ledger(const PowerSeries& Fs, const PowerSeries& Gs,
                                     const PowerSeries& Hs, int n, int m) {
    if (Gs.order() != Fs.order() || Hs.order() != Fs.order())
        throw BadParams("series orders must agree");
    int N = Fs.order();
    ObstructionLedger led;
    led.n = n;
    led.m = m;
    for (int k : {m, n}) {
        PowerSeries A = power_coeffs(Fs, k);
        PowerSeries B = power_coeffs(Gs, k);
        PowerSeries C = power_coeffs(Hs, k);
        for (int i = 0; i <= N; ++i) {
            led.A[{k, i}] = A[i];
            led.B[{k, i}] = B[i];
            led.C[{k, i}] = C[i];
        }
    }
    led.d.assign(static_cast<size_t>(N) + 1, 0.0);
    led.d_scale.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int i = 0; i <= N; ++i) {
        double sum = 0.0, scale = 0.0;
        for (int j = 0; j <= i; ++j) {
            double w = factorial(j) * factorial(i - j);
            double t1 = led.A[{m, j}] * (led.B[{n, i - j}] - led.C[{n, i - j}]) * w;
            double t2 = led.A[{n, j}] * (led.B[{m, i - j}] - led.C[{m, i - j}]) * w;
            sum += t1 - t2;
            scale = std::max({scale, std::abs(t1), std::abs(t2)});
        }
        led.d[static_cast<size_t>(i)] = sum;
        led.d_scale[static_cast<size_t>(i)] = scale;
    }
    return led;
}

ObstructionLedger obstruction_for_pair(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q,
                                       int n, int m, int N) {
    std::optional<double> T = first_divergence(p, q);
    if (!T) throw IdenticalFunctions("functions agree everywhere");
    PowerSeries Fs = taylor_at_zero(p, N);
    PowerSeries Gs = taylor_at_zero(tail_at(p, *T), N);
    PowerSeries Hs = taylor_at_zero(tail_at(q, *T), N);
    ObstructionLedger led = obstruction_ledger(Fs, Gs, Hs, n, m);
    led.T = *T;
    return led;
}

BoundaryVerdict boundary_relation(double u, double v, HeadValue F0, int n, int m) {
    constexpr double tol = 1e-10;
    BoundaryVerdict out;
    auto record = [&out](bool ok, const std::string& what) {
        (ok ? out.satisfied : out.violated).push_back(what);
        return ok;
    };
    auto pw = [](double x, int k) { return std::pow(x, k); };
    bool same = std::abs(u - v) <= tol * (1.0 + std::abs(u));
    if (F0 == HeadValue::One) {
        if (same) {
            bool zero_ok = std::abs(u) <= tol;
            bool crit_ok = std::abs(pw(u, n - m) - static_cast<double>(m) / n) <= tol;
            out.consistent = record(zero_ok, "u = 0") | record(crit_ok, "u^{n-m} = m/n");
        } else {
            bool eq = std::abs((pw(u, n) - pw(u, m)) - (pw(v, n) - pw(v, m))) <=
                      tol * (1.0 + std::abs(pw(u, n)) + std::abs(pw(v, n)));
            double x0 = std::pow(static_cast<double>(m) / n, 1.0 / (n - m));
            bool c1 = v < x0 + tol;
            bool c2 = !(u >= 1.0 - tol) || v <= tol;
            bool c3 = !(n % 2 == 1 && m % 2 == 0) || u <= 1.0 + tol;
            record(eq, "u^n - u^m = v^n - v^m");
            record(c1, "v < x0");
            record(c2, "u >= 1 implies v <= 0");
            record(c3, "n odd, m even implies u <= 1");
            out.consistent = eq && c1 && c2 && c3;
        }
    } else {
        if (same) {
            out.consistent = record(std::abs(u) <= tol, "u = 0");
        } else {
            bool even = n % 2 == 0;
            bool neg = std::abs(v + u) <= tol * (1.0 + std::abs(u));
            record(even, "n even");
            record(neg, "v = -u");
            out.consistent = even && neg;
        }
    }
    return out;
}

}  // namespace laprat
