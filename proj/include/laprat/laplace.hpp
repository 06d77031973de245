#pragma once

#include <functional>
#include <vector>

#include "laprat/fnmodel.hpp"
#include "laprat/poly.hpp"

namespace laprat {

// e^{-lambda*delay} * num(lambda)/den(lambda), deg num < deg den, den monic.
struct TransformAtom {
    double delay = 0.0;
    Poly num;
    Poly den{1.0};
};

// Sum of atoms sorted by delay. A delay may carry several atoms (one per
// pole family) to keep denominator degrees bounded. sigma is the abscissa of
// convergence (-inf sentinel when the underlying function has no unbounded
// support).
struct TransformExpr {
    std::vector<TransformAtom> atoms;
    double sigma = -kInf;
};

TransformExpr transform(const PiecewiseExpPoly& f);

inline constexpr double kEvalMargin = 0.1;

double eval_transform(const TransformExpr& T, double lambda, double margin = kEvalMargin);

// Quadrature oracle, independent of the closed form.
double numeric_transform(const PiecewiseExpPoly& f, double lambda, double tol);

// Coefficients c_0..c_N with T(lambda) ~ sum c_i / lambda^{i+1}; delayed
// atoms decay faster than any power and are ignored.
std::vector<double> asymptotic_coeffs(const TransformExpr& T, int N);

// Atom algebra used by the ratio tests. Delays add on multiplication; atoms
// sharing a delay are combined by rational addition.
TransformExpr mul(const TransformExpr& a, const TransformExpr& b);
TransformExpr sub(const TransformExpr& a, const TransformExpr& b);

// Pairwise products without per-delay merging; lets callers measure
// cancellation against the pre-sum magnitudes.
std::vector<TransformAtom> product_atoms(const TransformExpr& a, const TransformExpr& b);

TransformAtom make_atom(double delay, const Rational& r);
Rational atom_rational(const TransformAtom& a);

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol);

}  // namespace laprat
