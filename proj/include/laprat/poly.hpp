#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace laprat {

// Dense polynomial, c[i] multiplies x^i; empty vector is the zero polynomial.
template <typename S>
struct PolyT {
    std::vector<S> c;

    PolyT() = default;
    PolyT(std::initializer_list<S> init) : c(init) { trim(); }
    explicit PolyT(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }

    static PolyT one() { return PolyT{S(1)}; }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    double max_mag() const {
        double m = 0.0;
        for (const auto& v : c) m = std::max(m, std::abs(v));
        return m;
    }

    // Drop trailing coefficients that are negligible against the largest one.
    void trim(double rel = 1e-13) {
        double m = max_mag();
        while (!c.empty() && std::abs(c.back()) <= rel * m) c.pop_back();
        if (m == 0.0) c.clear();
    }

    S eval(S x) const {
        S acc(0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    PolyT& operator+=(const PolyT& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), S(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }

    PolyT& operator-=(const PolyT& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), S(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }

    PolyT& operator*=(const S& s) {
        for (auto& v : c) v *= s;
        trim();
        return *this;
    }

    friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
    friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }
    friend PolyT operator*(PolyT a, const S& s) { return a *= s; }

    friend PolyT operator*(const PolyT& a, const PolyT& b) {
        if (a.is_zero() || b.is_zero()) return PolyT{};
        PolyT r;
        r.c.assign(a.c.size() + b.c.size() - 1, S(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }

    PolyT derivative() const {
        PolyT r;
        for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * S(static_cast<double>(i)));
        r.trim();
        return r;
    }
};

using Poly = PolyT<double>;
using CPoly = PolyT<std::complex<double>>;

// num/den with no cancellation; addition cross-multiplies.
template <typename S>
struct RationalT {
    PolyT<S> num;            // zero polynomial = zero rational
    PolyT<S> den{S(1)};

    static RationalT zero() { return RationalT{}; }

    bool is_zero() const { return num.is_zero(); }

    friend RationalT operator+(const RationalT& a, const RationalT& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return RationalT{a.num * b.den + b.num * a.den, a.den * b.den};
    }

    friend RationalT operator-(const RationalT& a, const RationalT& b) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return RationalT{b.num * S(-1), b.den};
        return RationalT{a.num * b.den - b.num * a.den, a.den * b.den};
    }

    friend RationalT operator*(const RationalT& a, const RationalT& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return RationalT{a.num * b.num, a.den * b.den};
    }
};

using Rational = RationalT<double>;
using CRational = RationalT<std::complex<double>>;

}  // namespace laprat
