#include "laprat/detail/cxterm.hpp"

#include <cmath>

namespace laprat::detail {

namespace {

constexpr double kTol = kSignatureTol;

bool same_rate(const std::complex<double>& a, const std::complex<double>& b) {
    return std::abs(a.real() - b.real()) <= kTol && std::abs(a.imag() - b.imag()) <= kTol;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

std::vector<CxTerm> to_complex(const std::vector<ExpPolyTerm>& terms) {
    std::vector<CxTerm> out;
    const std::complex<double> i(0.0, 1.0);
    for (const auto& t : terms) {
        switch (t.trig) {
            case Trig::None:
                out.push_back({t.coeff, t.tpow, {t.rate, 0.0}});
                break;
            case Trig::Cos:
                out.push_back({0.5 * t.coeff, t.tpow, {t.rate, t.freq}});
                out.push_back({0.5 * t.coeff, t.tpow, {t.rate, -t.freq}});
                break;
            case Trig::Sin:
                out.push_back({t.coeff / (2.0 * i), t.tpow, {t.rate, t.freq}});
                out.push_back({-t.coeff / (2.0 * i), t.tpow, {t.rate, -t.freq}});
                break;
        }
    }
    return merge(std::move(out));
}

std::vector<CxTerm> merge(std::vector<CxTerm> cx) {
    std::vector<CxTerm> out;
    for (const auto& t : cx) {
        bool found = false;
        for (auto& o : out) {
            if (o.tpow == t.tpow && same_rate(o.rate, t.rate)) {
                o.coeff += t.coeff;
                found = true;
                break;
            }
        }
        if (!found) out.push_back(t);
    }
    double mag = 0.0;
    for (const auto& t : out) mag = std::max(mag, std::abs(t.coeff));
    std::vector<CxTerm> kept;
    for (const auto& t : out)
        if (std::abs(t.coeff) > 1e-14 * mag && t.coeff != std::complex<double>(0.0)) kept.push_back(t);
    return kept;
}

std::vector<ExpPolyTerm> from_complex(std::vector<CxTerm> cx) {
    cx = merge(std::move(cx));
    std::vector<ExpPolyTerm> out;
    std::vector<bool> used(cx.size(), false);
    for (size_t i = 0; i < cx.size(); ++i) {
        if (used[i]) continue;
        const auto& t = cx[i];
        double w = t.rate.imag();
        if (std::abs(w) <= kTol) {
            out.push_back({t.coeff.real(), t.tpow, t.rate.real(), 0.0, Trig::None});
            used[i] = true;
            continue;
        }
        if (w < 0) continue;  // handled via its conjugate partner
        // z e^{(b+iw)t} + z2 e^{(b-iw)t} = e^{bt}[(z+z2)cos(wt) + i(z-z2)sin(wt)]
        std::complex<double> z2 = std::conj(t.coeff);
        for (size_t j = 0; j < cx.size(); ++j) {
            if (j == i || used[j]) continue;
            if (cx[j].tpow == t.tpow && same_rate(cx[j].rate, std::conj(t.rate))) {
                z2 = cx[j].coeff;
                used[j] = true;
                break;
            }
        }
        used[i] = true;
        double ccos = (t.coeff + z2).real();
        double csin = -(t.coeff - z2).imag();
        if (ccos != 0.0) out.push_back({ccos, t.tpow, t.rate.real(), w, Trig::Cos});
        if (csin != 0.0) out.push_back({csin, t.tpow, t.rate.real(), w, Trig::Sin});
    }
    return normalize_terms(std::move(out));
}

std::vector<CxTerm> mul(const std::vector<CxTerm>& a, const std::vector<CxTerm>& b) {
    std::vector<CxTerm> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b)
            out.push_back({x.coeff * y.coeff, x.tpow + y.tpow, x.rate + y.rate});
    return merge(std::move(out));
}

std::vector<CxTerm> pow(const std::vector<CxTerm>& a, int k) {
    std::vector<CxTerm> acc{{std::complex<double>(1.0), 0, std::complex<double>(0.0)}};
    for (int i = 0; i < k; ++i) acc = mul(acc, a);
    return acc;
}

std::vector<CxTerm> shift(const std::vector<CxTerm>& a, double s) {
    // c t^k e^{rt} evaluated at t+s: c e^{rs} sum_j C(k,j) s^{k-j} t^j e^{rt}
    std::vector<CxTerm> out;
    for (const auto& t : a) {
        std::complex<double> base = t.coeff * std::exp(t.rate * s);
        for (int j = 0; j <= t.tpow; ++j) {
            double spow = (t.tpow == j) ? 1.0 : std::pow(s, t.tpow - j);
            out.push_back({base * binom(t.tpow, j) * spow, j, t.rate});
        }
    }
    return merge(std::move(out));
}

}  // namespace laprat::detail
