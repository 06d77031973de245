#include "laprat/fnmodel.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "laprat/detail/cxterm.hpp"
#include "laprat/errors.hpp"
#include "laprat/poly.hpp"

namespace laprat {

namespace {

constexpr double kTol = kSignatureTol;

bool sig_less(const ExpPolyTerm& a, const ExpPolyTerm& b) {
    return std::tie(a.tpow, a.rate, a.freq, a.trig) < std::tie(b.tpow, b.rate, b.freq, b.trig);
}

bool sig_same(const ExpPolyTerm& a, const ExpPolyTerm& b) {
    return a.tpow == b.tpow && a.trig == b.trig && std::abs(a.rate - b.rate) <= kTol &&
           std::abs(a.freq - b.freq) <= kTol;
}

bool is_constant(const std::vector<ExpPolyTerm>& terms) {
    return terms.empty() ||
           (terms.size() == 1 && terms[0].tpow == 0 && terms[0].rate == 0.0 &&
            terms[0].trig == Trig::None);
}

bool is_polynomial(const std::vector<ExpPolyTerm>& terms) {
    for (const auto& t : terms)
        if (t.rate != 0.0 || t.trig != Trig::None) return false;
    return true;
}

}  // namespace

std::vector<ExpPolyTerm> normalize_terms(std::vector<ExpPolyTerm> terms) {
    std::sort(terms.begin(), terms.end(), sig_less);
    std::vector<ExpPolyTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && sig_same(merged.back(), t))
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    double mag = 0.0;
    for (const auto& t : merged) mag = std::max(mag, std::abs(t.coeff));
    std::vector<ExpPolyTerm> kept;
    for (auto& t : merged) {
        if (t.coeff == 0.0 || std::abs(t.coeff) <= 1e-14 * mag) continue;
        if (t.trig == Trig::None) t.freq = 0.0;
        kept.push_back(t);
    }
    return kept;
}

bool terms_equal(const std::vector<ExpPolyTerm>& a, const std::vector<ExpPolyTerm>& b,
                 double rel_tol) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!sig_same(a[i], b[i])) return false;
        double scale = std::max({1.0, std::abs(a[i].coeff), std::abs(b[i].coeff)});
        if (std::abs(a[i].coeff - b[i].coeff) > rel_tol * scale) return false;
    }
    return true;
}

double eval_terms(const std::vector<ExpPolyTerm>& terms, double t) {
    double sum = 0.0;
    for (const auto& term : terms) {
        double v = term.coeff;
        if (term.tpow > 0) v *= std::pow(t, term.tpow);
        if (term.rate != 0.0) v *= std::exp(term.rate * t);
        if (term.trig == Trig::Cos) v *= std::cos(term.freq * t);
        if (term.trig == Trig::Sin) v *= std::sin(term.freq * t);
        sum += v;
    }
    return sum;
}

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<Piece> pieces) {
    if (pieces.empty()) throw BadParams("piecewise function needs at least one piece");
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.start < b.start; });
    if (std::abs(pieces.front().start) > kTol)
        throw BadParams("first piece must start at 0");
    pieces.front().start = 0.0;
    for (auto& p : pieces) p.terms = normalize_terms(std::move(p.terms));
    // Drop zero-width slivers from nearly coincident starts, then coalesce
    // adjacent pieces carrying the same expression.
    std::vector<Piece> kept;
    for (auto& p : pieces) {
        if (!kept.empty() && p.start - kept.back().start <= kTol)
            kept.back().terms = std::move(p.terms);
        else
            kept.push_back(std::move(p));
    }
    for (auto& p : kept) {
        if (!pieces_.empty() && terms_equal(pieces_.back().terms, p.terms))
            continue;
        pieces_.push_back(std::move(p));
    }
}

PiecewiseExpPoly PiecewiseExpPoly::constant(double v) {
    Piece p;
    if (v != 0.0) p.terms.push_back({v, 0, 0.0, 0.0, Trig::None});
    return PiecewiseExpPoly({p});
}

double PiecewiseExpPoly::piece_end(size_t i) const {
    return i + 1 < pieces_.size() ? pieces_[i + 1].start : kInf;
}

const std::vector<ExpPolyTerm>& PiecewiseExpPoly::terms_at(double t) const {
    size_t i = pieces_.size() - 1;
    while (i > 0 && pieces_[i].start > t) --i;
    return pieces_[i].terms;
}

double PiecewiseExpPoly::operator()(double t) const { return eval_terms(terms_at(t), t); }

double eval(const PiecewiseExpPoly& f, double t) { return f(t); }

double PiecewiseExpPoly::growth_rate() const {
    const auto& terms = pieces_.back().terms;
    if (terms.empty()) return -kInf;
    double r = -kInf;
    for (const auto& t : terms) r = std::max(r, t.rate);
    return r;
}

bool PiecewiseExpPoly::vanishes_from(double T) const {
    for (size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].terms.empty()) continue;
        if (piece_end(i) > T + kTol) return false;
    }
    return true;
}

PiecewiseExpPoly pow(const PiecewiseExpPoly& f, int k) {
    if (k < 1) throw BadParams("power must be positive");
    std::vector<Piece> out;
    for (const auto& p : f.pieces())
        out.push_back({p.start, detail::from_complex(detail::pow(detail::to_complex(p.terms), k))});
    return PiecewiseExpPoly(std::move(out));
}

namespace {

// Union of piece boundaries; fn combines the two term lists on each segment.
template <typename F>
PiecewiseExpPoly combine(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, F&& fn) {
    std::vector<double> starts;
    for (const auto& p : f.pieces()) starts.push_back(p.start);
    for (const auto& p : g.pieces()) starts.push_back(p.start);
    std::sort(starts.begin(), starts.end());
    std::vector<Piece> out;
    for (double s : starts) {
        if (!out.empty() && s - out.back().start <= kTol) continue;
        out.push_back({s, fn(f.terms_at(s), g.terms_at(s))});
    }
    return PiecewiseExpPoly(std::move(out));
}

}  // namespace

PiecewiseExpPoly mul(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    return combine(f, g, [](const auto& a, const auto& b) {
        return detail::from_complex(detail::mul(detail::to_complex(a), detail::to_complex(b)));
    });
}

PiecewiseExpPoly add(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    return combine(f, g, [](const auto& a, const auto& b) {
        std::vector<ExpPolyTerm> terms = a;
        terms.insert(terms.end(), b.begin(), b.end());
        return normalize_terms(std::move(terms));
    });
}

PiecewiseExpPoly scale(const PiecewiseExpPoly& f, double c) {
    std::vector<Piece> out;
    for (const auto& p : f.pieces()) {
        Piece np{p.start, {}};
        if (c != 0.0)
            for (auto t : p.terms) {
                t.coeff *= c;
                np.terms.push_back(t);
            }
        out.push_back(std::move(np));
    }
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly concat(const PiecewiseExpPoly& F, const PiecewiseExpPoly& G, double T) {
    if (T <= 0.0) throw BadParams("junction time must be positive");
    if (!F.vanishes_from(T)) throw NonVanishingHead("head function does not vanish past the junction");
    std::vector<Piece> out;
    for (const auto& p : F.pieces())
        if (p.start < T - kTol) out.push_back(p);
    for (const auto& p : G.pieces())
        out.push_back({T + p.start, detail::from_complex(
                                        detail::shift(detail::to_complex(p.terms), -T))});
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly tail_at(const PiecewiseExpPoly& f, double T) {
    if (T < 0.0) throw BadParams("tail offset must be nonnegative");
    std::vector<Piece> out;
    for (size_t i = 0; i < f.pieces().size(); ++i) {
        if (f.piece_end(i) <= T + kTol && i + 1 < f.pieces().size()) continue;
        double s = std::max(f.pieces()[i].start, T);
        out.push_back({s - T, detail::from_complex(
                                  detail::shift(detail::to_complex(f.pieces()[i].terms), T))});
    }
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly truncate_before(const PiecewiseExpPoly& f, double T) {
    if (T <= 0.0) throw BadParams("truncation time must be positive");
    std::vector<Piece> out;
    for (const auto& p : f.pieces())
        if (p.start < T - kTol) out.push_back(p);
    out.push_back({T, {}});
    return PiecewiseExpPoly(std::move(out));
}

PowerSeries taylor_at_zero(const PiecewiseExpPoly& f, int N) {
    auto cx = detail::to_complex(f.pieces().front().terms);
    std::vector<double> coeffs(static_cast<size_t>(N) + 1, 0.0);
    for (const auto& t : cx) {
        std::complex<double> fac(1.0);  // r^{i-k}/(i-k)!
        for (int i = t.tpow; i <= N; ++i) {
            coeffs[static_cast<size_t>(i)] += (t.coeff * fac).real();
            fac *= t.rate / static_cast<double>(i - t.tpow + 1);
        }
    }
    return PowerSeries(std::move(coeffs));
}

std::optional<double> first_divergence(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    std::vector<double> starts;
    for (const auto& p : f.pieces()) starts.push_back(p.start);
    for (const auto& p : g.pieces()) starts.push_back(p.start);
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end(),
                             [](double a, double b) { return b - a <= kTol; }),
                 starts.end());
    for (double s : starts) {
        const auto& ft = f.terms_at(s);
        const auto& gt = g.terms_at(s);
        if (terms_equal(ft, gt)) continue;
        // The expressions differ; the difference is analytic with isolated
        // zeros, so the segment start is the divergence point unless the
        // difference is numerically indistinguishable from zero.
        std::vector<ExpPolyTerm> diff = ft;
        for (auto t : gt) {
            t.coeff = -t.coeff;
            diff.push_back(t);
        }
        diff = normalize_terms(std::move(diff));
        double scale = 0.0;
        for (const auto& t : ft) scale = std::max(scale, std::abs(t.coeff));
        for (const auto& t : gt) scale = std::max(scale, std::abs(t.coeff));
        bool nonzero = false;
        for (const auto& t : diff)
            if (std::abs(t.coeff) > 1e-10 * (1.0 + scale)) nonzero = true;
        if (nonzero) return s;
    }
    return std::nullopt;
}

namespace {

struct Extremes {
    double lo = kInf, hi = -kInf;
    double lo_w = 0.0, hi_w = 0.0;

    void add(double v, double t) {
        if (v < lo) {
            lo = v;
            lo_w = t;
        }
        if (v > hi) {
            hi = v;
            hi_w = t;
        }
    }
};

void scan_segment(const std::vector<ExpPolyTerm>& terms, double a, double b, int grid,
                  Extremes& ex) {
    if (grid < 8) grid = 8;
    std::vector<double> vals(static_cast<size_t>(grid) + 1);
    for (int i = 0; i <= grid; ++i) {
        double t = a + (b - a) * i / grid;
        vals[static_cast<size_t>(i)] = eval_terms(terms, t);
        ex.add(vals[static_cast<size_t>(i)], t);
    }
    // Golden-section polish around interior grid extrema.
    auto refine = [&](int i, int sign) {
        double lo = a + (b - a) * (i - 1) / grid;
        double hi = a + (b - a) * (i + 1) / grid;
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = sign * eval_terms(terms, x1), f2 = sign * eval_terms(terms, x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = sign * eval_terms(terms, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = sign * eval_terms(terms, x2);
            }
        }
        double t = 0.5 * (lo + hi);
        ex.add(eval_terms(terms, t), t);
    };
    for (int i = 1; i < grid; ++i) {
        double v = vals[static_cast<size_t>(i)];
        if (v < vals[static_cast<size_t>(i - 1)] && v < vals[static_cast<size_t>(i + 1)])
            refine(i, +1);
        if (v > vals[static_cast<size_t>(i - 1)] && v > vals[static_cast<size_t>(i + 1)])
            refine(i, -1);
    }
}

Poly terms_to_poly(const std::vector<ExpPolyTerm>& terms) {
    Poly p;
    for (const auto& t : terms) {
        if (p.c.size() <= static_cast<size_t>(t.tpow)) p.c.resize(static_cast<size_t>(t.tpow) + 1, 0.0);
        p.c[static_cast<size_t>(t.tpow)] += t.coeff;
    }
    p.trim(0.0);
    return p;
}

// Endpoint values plus derivative sign-change roots; exact up to bisection.
void poly_extremes(const Poly& p, double a, double b, Extremes& ex) {
    ex.add(p.eval(a), a);
    ex.add(p.eval(b), b);
    Poly d = p.derivative();
    if (d.is_zero()) return;
    const int scan = 1024;
    double prev = d.eval(a);
    for (int i = 1; i <= scan; ++i) {
        double t = a + (b - a) * i / scan;
        double cur = d.eval(t);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            double lo = a + (b - a) * (i - 1) / scan, hi = t;
            double flo = prev;
            for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = d.eval(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double r = 0.5 * (lo + hi);
            ex.add(p.eval(r), r);
        } else if (cur == 0.0) {
            ex.add(p.eval(t), t);
        }
        prev = cur;
    }
}

}  // namespace

RangeInfo range_info(const PiecewiseExpPoly& f, double t_lo, double t_hi, int grid_per_piece) {
    t_lo = std::max(t_lo, 0.0);
    if (!(t_lo < t_hi)) throw BadParams("range interval is empty");
    Extremes ex;
    bool certified = true;
    const auto& pieces = f.pieces();
    for (size_t i = 0; i < pieces.size(); ++i) {
        double a = std::max(pieces[i].start, t_lo);
        double b = std::min(f.piece_end(i), t_hi);
        if (a >= b) continue;
        const auto& terms = pieces[i].terms;
        if (terms.empty()) {
            ex.add(0.0, a);
            continue;
        }
        if (is_constant(terms)) {
            ex.add(terms[0].coeff, a);
            continue;
        }
        if (std::isinf(b)) {
            // Unbounded piece: classify the tail, then scan a finite window.
            double rmax = -kInf;
            for (const auto& t : terms) rmax = std::max(rmax, t.rate);
            int kmax = 0;
            for (const auto& t : terms)
                if (std::abs(t.rate - rmax) <= kTol) kmax = std::max(kmax, t.tpow);
            double c0 = 0.0, amp = 0.0;
            for (const auto& t : terms) {
                if (std::abs(t.rate - rmax) > kTol || t.tpow != kmax) continue;
                if (t.trig == Trig::None)
                    c0 += t.coeff;
                else
                    amp += std::abs(t.coeff);
            }
            bool grows = rmax > kTol || (std::abs(rmax) <= kTol && kmax > 0);
            if (grows) {
                if (c0 + amp > 0.0) ex.add(kInf, kInf);
                if (c0 - amp < 0.0) ex.add(-kInf, kInf);
            }
            if (is_polynomial(terms) && amp == 0.0) {
                Poly p = terms_to_poly(terms);
                Poly d = p.derivative();
                double bound = a + 1.0;
                if (!d.is_zero()) {
                    double lead = std::abs(d.c.back());
                    for (const auto& c : d.c) bound = std::max(bound, 1.0 + std::abs(c) / lead);
                }
                poly_extremes(p, a, std::max(a + 1.0, bound), ex);
                continue;
            }
            certified = false;
            // Window long enough for decaying parts to die and slow
            // oscillations to complete several periods.
            double horizon = 40.0;
            for (const auto& t : terms) {
                if (t.rate < -kTol) horizon = std::max(horizon, 40.0 / -t.rate);
                if (t.trig != Trig::None && t.freq > 0.0)
                    horizon = std::max(horizon, 8.0 * 6.283185307179586 / t.freq);
            }
            horizon = std::min(horizon, 4000.0);
            scan_segment(terms, a, a + horizon, grid_per_piece, ex);
            if (!grows) {
                // Limit of the non-oscillatory bounded part.
                double L = 0.0;
                for (const auto& t : terms)
                    if (std::abs(t.rate) <= kTol && t.tpow == 0 && t.trig == Trig::None)
                        L += t.coeff;
                ex.add(L, a + horizon);
            }
            continue;
        }
        if (is_polynomial(terms)) {
            poly_extremes(terms_to_poly(terms), a, b, ex);
            continue;
        }
        certified = false;
        scan_segment(terms, a, b, grid_per_piece, ex);
    }
    RangeInfo r;
    r.inf_value = ex.lo;
    r.sup_value = ex.hi;
    r.inf_witness = ex.lo_w;
    r.sup_witness = ex.hi_w;
    r.certified = certified;
    return r;
}

bool approx_equal(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double rel_tol) {
    const auto& fp = f.pieces();
    const auto& gp = g.pieces();
    if (fp.size() != gp.size()) return false;
    for (size_t i = 0; i < fp.size(); ++i) {
        if (std::abs(fp[i].start - gp[i].start) > 1e-9 * (1.0 + std::abs(fp[i].start)))
            return false;
        if (!terms_equal(fp[i].terms, gp[i].terms, rel_tol)) return false;
    }
    return true;
}

}  // namespace laprat
