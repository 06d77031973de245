#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laprat/fnmodel.hpp"

namespace laprat {

enum class Parity { BothOdd, NOddMEven, NEvenMOdd };
enum class NegAxisBehavior { OddFunction, Increasing, Decreasing };

// Shape of x^n - x^m: strictly decreasing on [0,x0], increasing after.
struct ShapeReport {
    double x0 = 0.0;  // (m/n)^{1/(n-m)}
    Parity parity = Parity::BothOdd;
    NegAxisBehavior negative_axis = NegAxisBehavior::OddFunction;
};

ShapeReport x0_and_shape(int n, int m);

enum class Theorem { T1, T2 };
enum class IdentOutcome { Identified, IdentifiedUpToSign, NotCovered, AssumptionViolated };
enum class CondStatus { Holds, Fails, Indeterminate, NotChecked };

struct IdentVerdict {
    Theorem theorem = Theorem::T1;
    IdentOutcome verdict = IdentOutcome::NotCovered;
    std::optional<int> matched_condition;  // 1-based
    std::array<CondStatus, 3> conditions{CondStatus::NotChecked, CondStatus::NotChecked,
                                         CondStatus::NotChecked};
    std::vector<std::pair<double, double>> witnesses;  // (t, value) of failures
    std::string class_constraints_on_q;
    bool normalized = false;  // p,q divided by p(0)
    double normalization = 1.0;
};

// Theorem for p(0)=1 (p is normalized by p(0) when possible). Verdicts are
// relative to the representable class of q.
IdentVerdict check_theorem1(const PiecewiseExpPoly& p,
                            const std::optional<PiecewiseExpPoly>& q, int n, int m);

// Theorem for p(0)=0.
IdentVerdict check_theorem2(const PiecewiseExpPoly& p,
                            const std::optional<PiecewiseExpPoly>& q, int n, int m);

}  // namespace laprat
