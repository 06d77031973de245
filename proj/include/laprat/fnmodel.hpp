#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "laprat/powerseries.hpp"

namespace laprat {

enum class Trig { None, Cos, Sin };

// One summand a * t^k * e^{b t} * {1, cos(w t), sin(w t)}.
struct ExpPolyTerm {
    double coeff = 0.0;
    int tpow = 0;
    double rate = 0.0;
    double freq = 0.0;  // 0 unless trig != None
    Trig trig = Trig::None;
};

// Right-open segment starting at `start`; empty term list means zero there.
struct Piece {
    double start = 0.0;
    std::vector<ExpPolyTerm> terms;
};

// Tolerance for matching term signatures (rates, frequencies, piece starts).
inline constexpr double kSignatureTol = 1e-12;

// Sort by (tpow, rate, freq, trig), merge duplicate signatures, drop zeros.
std::vector<ExpPolyTerm> normalize_terms(std::vector<ExpPolyTerm> terms);

bool terms_equal(const std::vector<ExpPolyTerm>& a, const std::vector<ExpPolyTerm>& b,
                 double rel_tol = 1e-12);

double eval_terms(const std::vector<ExpPolyTerm>& terms, double t);

// A function on [0,inf) as ordered right-open pieces, the last unbounded.
// Immutable after construction; the constructor canonicalizes: first piece
// starts at 0, starts strictly increasing (within kSignatureTol merged),
// adjacent pieces with identical term lists coalesced.
class PiecewiseExpPoly {
public:
    explicit PiecewiseExpPoly(std::vector<Piece> pieces);

    static PiecewiseExpPoly constant(double v);
    static PiecewiseExpPoly zero() { return constant(0.0); }

    const std::vector<Piece>& pieces() const { return pieces_; }

    // End of piece i (start of the next, +inf for the last).
    double piece_end(size_t i) const;

    const std::vector<ExpPolyTerm>& terms_at(double t) const;

    double operator()(double t) const;

    // Max rate over the unbounded piece; -inf if it is empty.
    double growth_rate() const;

    bool vanishes_from(double T) const;

private:
    std::vector<Piece> pieces_;
};

double eval(const PiecewiseExpPoly& f, double t);

PiecewiseExpPoly pow(const PiecewiseExpPoly& f, int k);
PiecewiseExpPoly mul(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
PiecewiseExpPoly add(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
PiecewiseExpPoly scale(const PiecewiseExpPoly& f, double c);
inline PiecewiseExpPoly negate(const PiecewiseExpPoly& f) { return scale(f, -1.0); }

// F on [0,T) continued by G(t-T) on [T,inf). F must vanish on [T,inf).
PiecewiseExpPoly concat(const PiecewiseExpPoly& F, const PiecewiseExpPoly& G, double T);

// t -> f(t+T), re-based to start at 0.
PiecewiseExpPoly tail_at(const PiecewiseExpPoly& f, double T);

// Truncation f * 1_{[0,T)}.
PiecewiseExpPoly truncate_before(const PiecewiseExpPoly& f, double T);

// Coefficients a_0..a_N of the first piece's expansion at 0.
PowerSeries taylor_at_zero(const PiecewiseExpPoly& f, int N);

// Infimum of {t >= 0 : f(t) != g(t)}; nullopt when f = g everywhere.
std::optional<double> first_divergence(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);

struct RangeInfo {
    double inf_value = 0.0;
    double sup_value = 0.0;
    double inf_witness = 0.0;
    double sup_witness = 0.0;
    bool certified = false;  // exact for constant/polynomial pieces only
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Extremes of f over (t_lo, t_hi) intersected with [0,inf); closure values at
// open endpoints count as limits. Unbounded values reported via +-inf.
RangeInfo range_info(const PiecewiseExpPoly& f, double t_lo, double t_hi,
                     int grid_per_piece = 4096);

bool approx_equal(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                  double rel_tol = 1e-9);

}  // namespace laprat
