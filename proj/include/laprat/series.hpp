#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "laprat/fnmodel.hpp"
#include "laprat/powerseries.hpp"

namespace laprat {

// Truncated k-fold Cauchy product.
PowerSeries power_coeffs(const PowerSeries& s, int k);

// Power-coefficient tables for the head/tail series and the obstruction
// values d_0..d_N that must all vanish for an H-equal pair.
struct ObstructionLedger {
    std::map<std::pair<int, int>, double> A, B, C;  // (k,i) -> coefficient
    std::vector<double> d;
    std::vector<double> d_scale;  // largest summand magnitude per d_i
    double T = 0.0;               // divergence point used
    int n = 0, m = 0;
};

ObstructionLedger obstruction_ledger(const PowerSeries& Fs, const PowerSeries& Gs,
                                     const PowerSeries& Hs, int n, int m);

inline constexpr int kDefaultLedgerOrder = 8;

// Splits p,q at their first divergence T into head p*1_{[0,T)} and tails
// p(.+T), q(.+T), then builds the ledger from their series.
ObstructionLedger obstruction_for_pair(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q,
                                       int n, int m, int N = kDefaultLedgerOrder);

enum class HeadValue { One, Zero };

// Diagnostic for the necessary boundary-value relations between the tail
// values u = G(0), v = H(0), branching on the head value F(0).
struct BoundaryVerdict {
    bool consistent = false;
    std::vector<std::string> satisfied;
    std::vector<std::string> violated;
};

BoundaryVerdict boundary_relation(double u, double v, HeadValue F0, int n, int m);

}  // namespace laprat
