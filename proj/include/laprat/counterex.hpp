#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laprat/fnmodel.hpp"

namespace laprat {

enum class Family { Thm11a, Thm11b, Thm11c, Thm11d, Thm12a, Thm12b, ExpFam, ConstTail };

std::optional<Family> family_from_string(const std::string& s);
std::string family_to_string(Family f);

struct PresetId {
    Family family = Family::Thm11b;
    std::map<std::string, double> params;  // c, a, T, n, m as applicable
};

struct PresetPair {
    PiecewiseExpPoly p;
    PiecewiseExpPoly q;
    int n = 2;
    int m = 1;
};

PresetPair gen_preset(const PresetId& id);

struct Root {
    double value = 0.0;
    bool trivial = false;  // reproduces c = e^{-aT}
    int multiplicity = 1;
};

// All real roots of x^n - x^m = e^{-naT} - e^{-maT}, bracketed on the
// monotone segments of x^n - x^m and bisected to full precision.
std::vector<Root> solve_c(int n, int m, double a, double T);

struct SpecialTimes {
    std::optional<double> T2;  // a > 0
    std::optional<double> T1;  // a < 0, n and m odd
    double b0 = 0.0;           // x0
};

SpecialTimes special_times(int n, int m, double a);

enum class FamilyCase {
    SingletonF,            // a < 0, n odd, m even
    ExpOnly,               // a < 0, n - m odd
    ExpPlusNegConstTail,   // a < 0, n and m odd
    ExpPlusPosConstTail,   // a > 0
};

struct FamilyClassification {
    FamilyCase kase = FamilyCase::ExpOnly;
    std::vector<std::string> members;
    bool includes_negatives = false;  // n - m even
};

FamilyClassification family_classify(int n, int m, double a);

// e^{-at}(1_{[0,T)} + c e^{aT} 1_{[T,inf)}).
PiecewiseExpPoly exp_family_member(double a, double T, double c);

}  // namespace laprat
