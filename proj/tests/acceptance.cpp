// End-to-end acceptance checks; prints one pass/fail line per criterion.
// Usage: acceptance [CORPUS_DIR] [CLI_PATH]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "laprat/counterex.hpp"
#include "laprat/dsl.hpp"
#include "laprat/errors.hpp"
#include "laprat/identify.hpp"
#include "laprat/laplace.hpp"
#include "laprat/ratio.hpp"
#include "laprat/series.hpp"
#include "util.hpp"

using namespace laprat;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("criterion %d: %s - %s\n", criterion, ok ? "pass" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

std::vector<PresetId> counterexample_presets() {
    return {
        {Family::Thm11a, {{"c", 0.6}}},
        {Family::Thm11a, {{"c", 0.75}}},
        {Family::Thm11a, {{"c", 0.9}}},
        {Family::Thm11b, {{"n", 2}, {"m", 1}}},
        {Family::Thm11b, {{"n", 3}, {"m", 2}}},
        {Family::Thm11b, {{"n", 5}, {"m", 3}}},
        {Family::Thm11c, {}},
        {Family::Thm11d, {}},
        {Family::Thm12a, {{"n", 2}, {"m", 1}}},
        {Family::Thm12a, {{"n", 3}, {"m", 1}}},
        {Family::Thm12b, {}},
    };
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void criterion1() {
    bool ok = true;
    std::string note;
    for (const auto& id : counterexample_presets()) {
        auto pair = gen_preset(id);
        double t0 = now_seconds();
        auto r = h_equal(pair.p, pair.q, pair.n, pair.m, 1e-9);
        double dt = now_seconds() - t0;
        if (r.verdict != Verdict::Equal || r.max_exact_residual > 1e-9 ||
            r.max_grid_residual > 1e-9 || dt >= 1.0) {
            ok = false;
            note = family_to_string(id.family);
        }
    }
    report(1, ok,
           ok ? "all counterexample presets verdict equal with residuals <= 1e-9, < 1 s each"
              : "preset failed: " + note);
}

void criterion2() {
    bool ok = true;
    for (const auto& id : counterexample_presets()) {
        auto pair = gen_preset(id);
        auto led = obstruction_for_pair(pair.p, pair.q, pair.n, pair.m, 8);
        for (size_t i = 0; i < led.d.size(); ++i)
            if (std::abs(led.d[i]) > 1e-8 * (1.0 + led.d_scale[i])) ok = false;
    }
    auto d0 = obstruction_ledger(PowerSeries{{1.0}}, PowerSeries{{2.0}},
                                 PowerSeries{{1.0}}, 2, 1);
    if (std::abs(d0.d[0] - 2.0) > 1e-10) ok = false;
    report(2, ok, "obstruction coefficients vanish on presets; synthetic d_0 = 2");
}

void criterion3() {
    double t0 = now_seconds();
    bool ok = true;
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dl(1.0, 20.0);
    for (int rep = 0; rep < 20 && ok; ++rep) {
        auto f = testutil::random_fn(rng);
        auto T = transform(f);
        double base = std::isinf(T.sigma) ? 0.0 : std::max(T.sigma, 0.0);
        for (int k = 0; k < 10; ++k) {
            double lam = base + 0.5 + dl(rng);
            double closed = eval_transform(T, lam);
            double quad = numeric_transform(f, lam, 1e-11);
            if (std::abs(closed - quad) > 1e-8 * (1.0 + std::abs(closed))) ok = false;
        }
    }
    double dt = now_seconds() - t0;
    if (dt >= 5.0) ok = false;
    report(3, ok, "closed-form vs quadrature <= 1e-8 over 200 samples in < 5 s");
}

// Conditioning of a transform evaluation: summed atom magnitudes over value.
double transform_condition(const TransformExpr& T, double lambda) {
    double mag = 0.0;
    for (const auto& a : T.atoms) {
        double nmag = 0.0, lp = 1.0;
        for (double c : a.num.c) {
            nmag += std::abs(c) * lp;
            lp *= lambda;
        }
        mag += std::exp(-lambda * a.delay) * nmag / std::abs(a.den.eval(lambda));
    }
    double val = std::abs(eval_transform(T, lambda));
    return val > 0.0 ? mag / val : kInf;
}

void criterion4() {
    bool ok = true;
    int cases = 0;
    std::mt19937 rng(41);

    // inversion H_{n,m} * H_{m,n} = 1
    for (int rep = 0; rep < 200 && cases < 60; ++rep) {
        auto f = testutil::random_fn(rng);
        double sigma = f.growth_rate();
        double base = (std::isinf(sigma) ? 0.0 : std::max(sigma, 0.0)) * 5 + 2.0;
        for (auto [n, m] : {std::pair{2, 1}, {3, 2}, {5, 3}}) {
            double a = ratio_H(f, n, m, base);
            double b = ratio_H(f, m, n, base);
            if (std::abs(a) < 1e-6 || std::abs(a) > 1e6) continue;
            if (std::abs(a * b - 1.0) > 1e-12) ok = false;
            ++cases;
        }
    }

    // scaling law c^{n-m}, on well-conditioned samples
    std::uniform_real_distribution<double> cs(0.3, 3.0);
    int scaled = 0;
    for (int rep = 0; rep < 400 && scaled < 60; ++rep) {
        auto f = testutil::random_fn(rng);
        double c = cs(rng) * (rep % 2 ? 1.0 : -1.0);
        double sigma = f.growth_rate();
        double base = (std::isinf(sigma) ? 0.0 : std::max(sigma, 0.0)) * 4 + 2.0;
        for (auto [n, m] : {std::pair{2, 1}, {4, 3}}) {
            auto Tn = transform(pow(f, n));
            auto Tm = transform(pow(f, m));
            if (transform_condition(Tn, base) > 1e4 || transform_condition(Tm, base) > 1e4)
                continue;
            double h = ratio_H(f, n, m, base);
            if (std::abs(h) < 1e-9) continue;
            double hs = ratio_H(scale(f, c), n, m, base);
            double want = std::pow(c, n - m) * h;
            if (std::abs(hs - want) > 1e-10 * std::abs(want)) ok = false;
            ++scaled;
            ++cases;
        }
    }
    if (scaled < 60) ok = false;

    // shift law: delaying by a dead interval leaves the ratio equal
    for (int rep = 0; rep < 20; ++rep) {
        auto g = testutil::random_fn(rng);
        double a = 0.3 + 0.05 * rep;
        auto p = concat(PiecewiseExpPoly::zero(), g, a);
        auto q = tail_at(p, a);
        for (auto [n, m] : {std::pair{2, 1}, {3, 2}}) {
            if (h_equal(p, q, n, m, 1e-9).verdict != Verdict::Equal) ok = false;
            ++cases;
        }
    }

    // sign law: p vs -p indistinguishable when n - m is even
    for (int rep = 0; rep < 40; ++rep) {
        auto f = testutil::random_fn(rng);
        if (h_equal(f, negate(f), 3, 1, 1e-9).verdict != Verdict::Equal) ok = false;
        ++cases;
    }

    if (cases < 200) ok = false;
    report(4, ok,
           "inversion/scaling/shift/sign identities over " + std::to_string(cases) +
               " randomized cases");
}

void criterion5() {
    bool ok = true;
    std::mt19937 rng(51);
    std::uniform_real_distribution<double> as(0.2, 1.0);
    std::uniform_real_distribution<double> Ts(0.1, 1.0);
    std::uniform_int_distribution<int> ns(2, 5);
    for (int rep = 0; rep < 50; ++rep) {
        int n = ns(rng);
        int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
        while (std::gcd(n, m) != 1)
            m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
        double a = as(rng) * (rep % 2 ? 1.0 : -1.0);
        double T = Ts(rng);
        double rhs = std::exp(-n * a * T) - std::exp(-m * a * T);
        auto g = [&](double x) { return std::pow(x, n) - std::pow(x, m) - rhs; };
        auto roots = solve_c(n, m, a, T);
        for (const auto& r : roots)
            if (std::abs(g(r.value)) > 1e-12 * (1.0 + std::abs(rhs))) ok = false;
        // brute-force: every sign change matches a simple root and vice versa
        const int N = 200000;
        double lo = -5.0, hi = 5.0;
        int crossings = 0;
        double prev = g(lo);
        for (int i = 1; i <= N; ++i) {
            double x = lo + (hi - lo) * i / N;
            double v = g(x);
            if ((prev < 0 && v > 0) || (prev > 0 && v < 0)) {
                double mid = x - (hi - lo) / (2.0 * N);
                bool matched = false;
                for (const auto& r : roots)
                    if (std::abs(r.value - mid) <= 2.0 * (hi - lo) / N) matched = true;
                if (!matched) ok = false;
                ++crossings;
            }
            if (v != 0.0) prev = v;
        }
        int simple = 0;
        for (const auto& r : roots)
            if (r.multiplicity == 1 && r.value > lo && r.value < hi) ++simple;
        if (simple != crossings) ok = false;
    }

    auto st = special_times(3, 1, -1.0);
    double want = std::log(2.0) - 0.5 * std::log(3.0);
    double target = 2.0 / (3.0 * std::sqrt(3.0));
    if (!st.T1 || std::abs(*st.T1 - want) > 1e-12) ok = false;
    if (st.T1) {
        double lhs = std::exp(3.0 * *st.T1) - std::exp(*st.T1);
        double rhs = st.b0 - st.b0 * st.b0 * st.b0;
        if (std::abs(lhs - target) > 1e-12 || std::abs(rhs - target) > 1e-12) ok = false;
    }

    for (auto [n, m, a, T] :
         {std::tuple{2, 1, 1.0, std::log(3.0)}, {3, 2, 0.5, 0.7}, {3, 1, -0.4, 0.3}}) {
        auto f = exp_family_member(a, T, std::exp(-a * T));
        bool found = false;
        for (const auto& r : solve_c(n, m, a, T)) {
            if (r.trivial) continue;
            found = true;
            auto member = exp_family_member(a, T, r.value);
            if (h_equal(f, member, n, m, 1e-9).verdict != Verdict::Equal) ok = false;
        }
        if (!found) ok = false;
    }
    report(5, ok, "root solver, special times, and family members check out");
}

void criterion6() {
    bool ok = true;
    // never identified on the counterexample pairs
    for (const auto& id : counterexample_presets()) {
        auto pair = gen_preset(id);
        bool zero_head = std::abs(pair.p(0.0)) <= 1e-9;
        try {
            auto v = zero_head ? check_theorem2(pair.p, pair.q, pair.n, pair.m)
                               : check_theorem1(pair.p, pair.q, pair.n, pair.m);
            if (v.verdict == IdentOutcome::Identified ||
                v.verdict == IdentOutcome::IdentifiedUpToSign)
                ok = false;
        } catch (const BadNormalization&) {
            // counts as assumption violated
        }
    }

    // identifiable step function: values alternate 1 and 2
    PiecewiseExpPoly step({{0.0, {{1.0, 0, 0.0, 0.0, Trig::None}}},
                           {1.0, {{2.0, 0, 0.0, 0.0, Trig::None}}},
                           {2.0, {{1.0, 0, 0.0, 0.0, Trig::None}}},
                           {3.0, {{2.0, 0, 0.0, 0.0, Trig::None}}}});
    auto v1 = check_theorem1(step, step, 2, 1);
    if (v1.verdict != IdentOutcome::Identified || v1.conditions[1] != CondStatus::Holds)
        ok = false;

    // ramp head plus the step tail satisfies all three zero-head conditions
    PiecewiseExpPoly ramp_step({{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}},
                                {1.0, {{2.0, 0, 0.0, 0.0, Trig::None}}},
                                {2.0, {{1.0, 0, 0.0, 0.0, Trig::None}}},
                                {3.0, {{2.0, 0, 0.0, 0.0, Trig::None}}}});
    auto w1 = check_theorem2(ramp_step, ramp_step, 3, 2);
    auto w2 = check_theorem2(ramp_step, ramp_step, 3, 1);
    auto w3 = check_theorem2(ramp_step, ramp_step, 2, 1);
    if (w1.verdict != IdentOutcome::Identified || w1.conditions[0] != CondStatus::Holds)
        ok = false;
    if (w2.verdict != IdentOutcome::Identified || w2.conditions[1] != CondStatus::Holds)
        ok = false;
    if (w3.verdict != IdentOutcome::Identified || w3.conditions[2] != CondStatus::Holds)
        ok = false;

    // growing exponential under the parity condition
    PiecewiseExpPoly e2t({{0.0, {{1.0, 0, 2.0, 0.0, Trig::None}}}});
    auto v3 = check_theorem1(e2t, std::nullopt, 3, 2);
    if (v3.verdict != IdentOutcome::Identified || v3.matched_condition != 3) ok = false;

    // both-odd exponents without sign information: up to sign
    PiecewiseExpPoly ramp({{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}}});
    auto v4 = check_theorem2(ramp, std::nullopt, 3, 1);
    if (v4.verdict != IdentOutcome::IdentifiedUpToSign) ok = false;

    report(6, ok, "checker sound on counterexamples, affirmative on covered cases");
}

void criterion7() {
    bool ok = true;
    struct Decomp {
        PiecewiseExpPoly F, G, H;
        double T;
        int n, m;
    };
    std::vector<Decomp> decomps;
    // ramp decomposition of the linear pair
    decomps.push_back({PiecewiseExpPoly({{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}}, {1.0, {}}}),
                       PiecewiseExpPoly({{0.0,
                                          {{1.0, 0, 0.0, 0.0, Trig::None},
                                           {1.0, 1, 0.0, 0.0, Trig::None}}}}),
                       PiecewiseExpPoly({{0.0,
                                          {{-1.0, 0, 0.0, 0.0, Trig::None},
                                           {1.0, 1, 0.0, 0.0, Trig::None}}}}),
                       1.0, 2, 1});
    // two exponential-family decompositions at small T
    for (auto [n, m, a, T] : {std::tuple{2, 1, 1.0, 0.2}, {3, 1, -1.0, 0.1}}) {
        double c = 0.0;
        bool have = false;
        for (const auto& r : solve_c(n, m, a, T))
            if (!r.trivial) {
                c = r.value;
                have = true;
                break;
            }
        if (!have) {
            ok = false;
            continue;
        }
        auto F = truncate_before(exp_family_member(a, T, std::exp(-a * T)), T);
        auto G = PiecewiseExpPoly(
            {{0.0, {{std::exp(-a * T), 0, -a, 0.0, Trig::None}}}});  // e^{-a(t+T)}
        auto H = PiecewiseExpPoly({{0.0, {{c, 0, -a, 0.0, Trig::None}}}});
        decomps.push_back({F, G, H, T, n, m});
    }
    for (const auto& d : decomps) {
        auto rep = xi_check(d.F, d.G, d.H, d.T, d.n, d.m, {5.0, 10.0, 20.0, 40.0});
        if (rep.max_residual > 1e-9 || !rep.decay_monotone) ok = false;
    }
    report(7, ok, "xi identity agrees at lambda in {5,10,20} and decays through 40");
}

void criterion8() {
    bool ok = true;
    const int N = 6;
    double fac[N + 1];
    fac[0] = 1.0;
    for (int i = 1; i <= N; ++i) fac[i] = fac[i - 1] * i;
    for (const auto& id : counterexample_presets()) {
        auto pair = gen_preset(id);
        for (const auto& f : {pair.p, pair.q}) {
            auto asym = asymptotic_coeffs(transform(f), N);
            auto tay = taylor_at_zero(f, N);
            for (int i = 0; i <= N; ++i) {
                double want = fac[i] * tay[i];
                if (std::abs(asym[static_cast<size_t>(i)] - want) >
                    1e-6 * (1.0 + std::abs(want)))
                    ok = false;
            }
        }
    }
    report(8, ok, "asymptotic transform coefficients match i! times the Taylor series");
}

void criterion9(const std::string& corpus_dir) {
    bool ok = true;
    std::vector<std::string> files = {
        "const1.fn",   "expfam_p.fn", "expfam_q.fn", "thm11a_p.fn", "thm11a_q.fn",
        "thm11b_p.fn", "thm11b_q.fn", "thm11c_p.fn", "thm11c_q.fn", "thm11d_p.fn",
        "thm11d_q.fn", "thm12a_p.fn", "thm12a_q.fn", "thm12b_p.fn", "thm12b_q.fn"};
    auto close = [](const PiecewiseExpPoly& a, const PiecewiseExpPoly& b) {
        for (double t = 0.0; t < 8.0; t += 0.0317) {
            double va = a(t), vb = b(t);
            if (std::abs(va - vb) > 1e-12 * (1.0 + std::abs(va) + std::abs(vb)))
                return false;
        }
        return true;
    };
    for (const auto& name : files) {
        std::ifstream in(corpus_dir + "/" + name, std::ios::binary);
        if (!in) {
            ok = false;
            continue;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            auto f = parse(ss.str());
            if (!close(parse(format(f)), f)) ok = false;
        } catch (const ParseError&) {
            ok = false;
        }
    }

    std::mt19937 rng(91);
    for (int rep = 0; rep < 200; ++rep) {
        auto f = testutil::random_fn(rng);
        if (!close(parse(format(f)), f)) ok = false;
    }

    const std::string alphabet = "0123456789.+-*/^()[]{},;: tesincopxlqrfn";
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(1, 60);
    for (int rep = 0; rep < 1000; ++rep) {
        std::string src;
        int L = len(rng);
        for (int i = 0; i < L; ++i) src.push_back(alphabet[pick(rng)]);
        try {
            (void)parse(src);
        } catch (const ParseError&) {
            // structured error: fine
        } catch (...) {
            ok = false;
        }
    }
    report(9, ok, "corpus parses, round trips, and malformed input fails cleanly");
}

int run_cli(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cli_checks(const std::string& corpus_dir, const std::string& cli) {
    if (cli.empty()) return;
    bool ok = true;
    // exit-code contract over the corpus pairs
    struct Pair {
        std::string base;
        int n, m;
    };
    for (const auto& pr : {Pair{"thm11a", 2, 1}, {"thm11b", 2, 1}, {"thm11c", 2, 1},
                           {"thm11d", 3, 1}, {"thm12a", 2, 1}, {"thm12b", 2, 1},
                           {"expfam", 2, 1}}) {
        std::string cmd = cli + " equal " + corpus_dir + "/" + pr.base + "_p.fn " +
                          corpus_dir + "/" + pr.base + "_q.fn -n " + std::to_string(pr.n) +
                          " -m " + std::to_string(pr.m);
        if (run_cli(cmd) != 0) ok = false;
    }
    // verdict-negative exit code
    int neg = std::system((cli + " equal " + corpus_dir + "/const1.fn " + corpus_dir +
                           "/thm12b_q.fn -n 2 -m 1 >/dev/null 2>&1")
                              .c_str());
    if (WEXITSTATUS(neg) != 1) ok = false;
    // byte-identical --json reruns
    std::string out1 = "/tmp/laprat_det1.json", out2 = "/tmp/laprat_det2.json";
    std::string cmd = cli + " equal " + corpus_dir + "/thm12b_p.fn " + corpus_dir +
                      "/thm12b_q.fn -n 2 -m 1 --json";
    (void)std::system((cmd + " > " + out1 + " 2>/dev/null").c_str());
    (void)std::system((cmd + " > " + out2 + " 2>/dev/null").c_str());
    if (slurp(out1).empty() || slurp(out1) != slurp(out2)) ok = false;
    // identified preset via the CLI
    if (run_cli(cli + " identify " + corpus_dir + "/const1.fn -n 2 -m 1") != 0) ok = false;
    report(10, ok, "CLI exit codes and deterministic JSON output");
}

}  // namespace

int main(int argc, char** argv) {
    std::string corpus_dir = argc > 1 ? argv[1] : "corpus";
    std::string cli = argc > 2 ? argv[2] : "";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(corpus_dir);
    cli_checks(corpus_dir, cli);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
