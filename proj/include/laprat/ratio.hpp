#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laprat/fnmodel.hpp"

namespace laprat {

struct AssumptionReport {
    bool a1_ok = true;  // support of p reaches down to 0
    bool a2_ok = true;  // gcd(n,m) = 1
    bool a3_ok = true;  // n > m
    std::string details;

    bool all_ok() const { return a1_ok && a2_ok && a3_ok; }
};

enum class Verdict { Equal, Unequal, Indeterminate };

struct EqualityReport {
    Verdict verdict = Verdict::Indeterminate;
    double max_grid_residual = 0.0;
    double max_exact_residual = 0.0;
    std::map<double, double> exact_residuals;  // delay -> numerator residual
    std::optional<double> witness_lambda;
    AssumptionReport assumptions;
};

inline constexpr double kDefaultTol = 1e-9;

double ratio_H(const PiecewiseExpPoly& p, int n, int m, double lambda);

// Decides transform(p^n)*transform(q^m) == transform(p^m)*transform(q^n),
// exactly per delay group and numerically on a lambda grid. Both paths must
// agree for a definite verdict.
EqualityReport h_equal(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q, int n, int m,
                       double tol = kDefaultTol);

// (p^n * q^m)(x) - (p^m * q^n)(x) by quadrature, per x.
std::vector<double> conv_residual(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q,
                                  int n, int m, const std::vector<double>& xs);

struct XiReport {
    double max_residual = 0.0;   // relative gap between the two sides
    bool decay_monotone = true;  // |xi(lambda) e^{lambda T}| decreasing
};

// Compares F^m(G^n-H^n) - F^n(G^m-H^m) against
// e^{-lambda T}(H^n G^m - G^n H^m) at each lambda.
XiReport xi_check(const PiecewiseExpPoly& F, const PiecewiseExpPoly& G,
                  const PiecewiseExpPoly& H, double T, int n, int m,
                  std::vector<double> lambdas);

AssumptionReport assumptions_check(const PiecewiseExpPoly& p, int n, int m);

}  // namespace laprat
