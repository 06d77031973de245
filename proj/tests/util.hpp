#pragma once

#include <random>
#include <vector>

#include "laprat/fnmodel.hpp"

namespace testutil {

using laprat::ExpPolyTerm;
using laprat::Piece;
using laprat::PiecewiseExpPoly;
using laprat::Trig;

inline ExpPolyTerm random_term(std::mt19937& rng, bool allow_trig = true) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> rate(-1.5, 1.5);
    std::uniform_real_distribution<double> freq(0.5, 3.0);
    std::uniform_int_distribution<int> tpow(0, 2);
    std::uniform_int_distribution<int> trig(0, 3);
    ExpPolyTerm t;
    t.coeff = coeff(rng);
    if (t.coeff == 0.0) t.coeff = 1.0;
    t.tpow = tpow(rng);
    t.rate = rate(rng);
    int tr = allow_trig ? trig(rng) : 0;
    if (tr == 1) {
        t.trig = Trig::Cos;
        t.freq = freq(rng);
    } else if (tr == 2) {
        t.trig = Trig::Sin;
        t.freq = freq(rng);
    }
    return t;
}

inline PiecewiseExpPoly random_fn(std::mt19937& rng, bool allow_trig = true) {
    std::uniform_int_distribution<int> npieces(1, 3);
    std::uniform_int_distribution<int> nterms(1, 2);
    std::uniform_real_distribution<double> gap(0.3, 1.5);
    std::vector<Piece> pieces;
    double start = 0.0;
    int np = npieces(rng);
    for (int i = 0; i < np; ++i) {
        Piece p;
        p.start = start;
        int nt = nterms(rng);
        for (int j = 0; j < nt; ++j) p.terms.push_back(random_term(rng, allow_trig));
        pieces.push_back(std::move(p));
        start += gap(rng);
    }
    return PiecewiseExpPoly(std::move(pieces));
}

}  // namespace testutil
