#include <doctest.h>

#include <cmath>
#include <random>

#include "laprat/errors.hpp"
#include "laprat/fnmodel.hpp"
#include "util.hpp"

using namespace laprat;

namespace {

PiecewiseExpPoly indicator01() {
    return PiecewiseExpPoly({{0.0, {{1.0, 0, 0.0, 0.0, Trig::None}}}, {1.0, {}}});
}

PiecewiseExpPoly exp_fn(double rate) {
    return PiecewiseExpPoly({{0.0, {{1.0, 0, rate, 0.0, Trig::None}}}});
}

PiecewiseExpPoly sin_fn() {
    return PiecewiseExpPoly({{0.0, {{1.0, 0, 0.0, 1.0, Trig::Sin}}}});
}

PiecewiseExpPoly ramp() {
    return PiecewiseExpPoly({{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}}});
}

// q(t) = t - 2*1_{[1,inf)}
PiecewiseExpPoly ramp_with_drop() {
    return PiecewiseExpPoly(
        {{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}},
         {1.0, {{-2.0, 0, 0.0, 0.0, Trig::None}, {1.0, 1, 0.0, 0.0, Trig::None}}}});
}

}  // namespace

TEST_CASE("eval basics") {
    CHECK(indicator01()(0.5) == doctest::Approx(1.0));
    CHECK(indicator01()(2.0) == doctest::Approx(0.0));
    CHECK(exp_fn(-1.0)(0.0) == doctest::Approx(1.0));
    CHECK(sin_fn()(std::acos(-1.0) / 2) == doctest::Approx(1.0));
}

TEST_CASE("pow matches pointwise powers") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> ts(0.0, 6.0);
    for (int rep = 0; rep < 20; ++rep) {
        auto f = testutil::random_fn(rng);
        for (int k = 1; k <= 6; ++k) {
            auto fk = pow(f, k);
            for (int i = 0; i < 100; ++i) {
                double t = ts(rng);
                double want = std::pow(f(t), k);
                // Cancellation in the expanded form is bounded by the sum of
                // term magnitudes, so measure the error against that scale.
                double termsum = 0.0;
                for (const auto& term : fk.terms_at(t))
                    termsum += std::abs(term.coeff) * std::pow(t, term.tpow) *
                               std::exp(term.rate * t);
                double tol = 1e-10 * std::abs(want) + 1e-12 * (1.0 + termsum);
                CHECK(std::abs(fk(t) - want) <= tol);
            }
        }
    }
}

TEST_CASE("pow of sine linearizes") {
    auto s2 = pow(sin_fn(), 2);
    for (double t : {0.3, 1.0, 2.5, 4.0}) {
        CHECK(s2(t) == doctest::Approx(0.5 - 0.5 * std::cos(2 * t)).epsilon(1e-12));
    }
    // canonical form has no frequency-1 terms left
    for (const auto& term : s2.pieces()[0].terms) CHECK(term.freq != doctest::Approx(1.0));
}

TEST_CASE("concat reassembles a truncated function") {
    std::mt19937 rng(102);
    for (int rep = 0; rep < 10; ++rep) {
        auto p = testutil::random_fn(rng);
        double T = 1.0 + 0.1 * rep;
        auto glued = concat(truncate_before(p, T), tail_at(p, T), T);
        for (double t = 0.01; t < 6.0; t += 0.037)
            CHECK(glued(t) == doctest::Approx(p(t)).epsilon(1e-12));
    }
}

TEST_CASE("concat of ramp head and shifted line is the plain ramp") {
    PiecewiseExpPoly F({{0.0, {{1.0, 1, 0.0, 0.0, Trig::None}}}, {1.0, {}}});
    PiecewiseExpPoly G({{0.0, {{1.0, 0, 0.0, 0.0, Trig::None}, {1.0, 1, 0.0, 0.0, Trig::None}}}});
    auto glued = concat(F, G, 1.0);
    for (double t = 0.0; t < 5.0; t += 0.13) CHECK(glued(t) == doctest::Approx(t).epsilon(1e-12));
    CHECK(glued.pieces().size() == 1);  // pieces coalesce to a single ramp
}

TEST_CASE("concat rejects non-vanishing heads") {
    CHECK_THROWS_AS(concat(ramp(), ramp(), 1.0), NonVanishingHead);
}

TEST_CASE("tail_at examples") {
    auto q = ramp_with_drop();
    auto tq = tail_at(q, 1.0);
    for (double t = 0.0; t < 4.0; t += 0.17) CHECK(tq(t) == doctest::Approx(t - 1.0));
    auto te = tail_at(exp_fn(-1.0), std::log(2.0));
    for (double t = 0.0; t < 4.0; t += 0.17)
        CHECK(te(t) == doctest::Approx(0.5 * std::exp(-t)).epsilon(1e-12));
}

TEST_CASE("taylor_at_zero examples") {
    auto c = taylor_at_zero(exp_fn(-1.0), 3);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(-1.0));
    CHECK(c[2] == doctest::Approx(0.5));
    CHECK(c[3] == doctest::Approx(-1.0 / 6));
    auto r = taylor_at_zero(ramp_with_drop(), 2);
    CHECK(r[0] == doctest::Approx(0.0));
    CHECK(r[1] == doctest::Approx(1.0));
    CHECK(r[2] == doctest::Approx(0.0));
    auto s = taylor_at_zero(sin_fn(), 3);
    CHECK(s[0] == doctest::Approx(0.0));
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(s[2] == doctest::Approx(0.0));
    CHECK(s[3] == doctest::Approx(-1.0 / 6));
}

TEST_CASE("taylor of a power is the Cauchy power of the taylor") {
    std::mt19937 rng(103);
    for (int rep = 0; rep < 15; ++rep) {
        auto f = testutil::random_fn(rng);
        const int N = 6;
        auto base = taylor_at_zero(f, N);
        for (int k = 2; k <= 4; ++k) {
            auto direct = taylor_at_zero(pow(f, k), N);
            // k-fold Cauchy product
            std::vector<double> acc(N + 1, 0.0);
            acc[0] = 1.0;
            for (int rep2 = 0; rep2 < k; ++rep2) {
                std::vector<double> nxt(N + 1, 0.0);
                for (int i = 0; i <= N; ++i)
                    for (int j = 0; j <= i; ++j) nxt[i] += acc[j] * base[i - j];
                acc = nxt;
            }
            double scale = 1.0;
            for (double v : acc) scale = std::max(scale, std::abs(v));
            for (int i = 0; i <= N; ++i)
                CHECK(direct[i] == doctest::Approx(acc[i]).epsilon(1e-10).scale(scale));
        }
    }
}

TEST_CASE("first_divergence") {
    CHECK(first_divergence(ramp(), ramp_with_drop()) == doctest::Approx(1.0));
    CHECK(first_divergence(ramp_with_drop(), ramp()) == doctest::Approx(1.0));
    CHECK(!first_divergence(ramp(), ramp()).has_value());
    CHECK(first_divergence(PiecewiseExpPoly::constant(1.0), indicator01()) ==
          doctest::Approx(1.0));
}

TEST_CASE("range_info on polynomial matches brute force") {
    // f = t^2 - 3t + 1 on [0,2), then constant 5
    PiecewiseExpPoly f({{0.0,
                         {{1.0, 0, 0.0, 0.0, Trig::None},
                          {-3.0, 1, 0.0, 0.0, Trig::None},
                          {1.0, 2, 0.0, 0.0, Trig::None}}},
                        {2.0, {{5.0, 0, 0.0, 0.0, Trig::None}}}});
    auto ri = range_info(f, 0.0, kInf);
    double binf = kInf, bsup = -kInf;
    for (int i = 0; i < 1000000; ++i) {
        double t = 4.0 * i / 1000000.0;
        double v = f(t);
        binf = std::min(binf, v);
        bsup = std::max(bsup, v);
    }
    CHECK(ri.inf_value == doctest::Approx(binf).epsilon(1e-8));
    CHECK(ri.sup_value == doctest::Approx(bsup).epsilon(1e-8));
    CHECK(ri.inf_value == doctest::Approx(1.0 - 9.0 / 4).epsilon(1e-10));
}

TEST_CASE("range_info basics") {
    auto rc = range_info(PiecewiseExpPoly::constant(1.0), 0.0, kInf);
    CHECK(rc.inf_value == doctest::Approx(1.0));
    CHECK(rc.sup_value == doctest::Approx(1.0));
    auto rs = range_info(sin_fn(), 0.0, kInf);
    CHECK(rs.inf_value == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(rs.sup_value == doctest::Approx(1.0).epsilon(1e-6));
    auto rg = range_info(exp_fn(2.0), 0.0, kInf);
    CHECK(rg.sup_value == kInf);
    CHECK(rg.inf_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("algebra helpers") {
    auto s = add(exp_fn(-1.0), scale(exp_fn(-1.0), -1.0));
    for (double t = 0.0; t < 3.0; t += 0.5) CHECK(s(t) == doctest::Approx(0.0));
    auto prod = mul(ramp(), ramp());
    CHECK(prod(3.0) == doctest::Approx(9.0));
    CHECK(approx_equal(ramp(), ramp()));
    CHECK(!approx_equal(ramp(), ramp_with_drop()));
}
