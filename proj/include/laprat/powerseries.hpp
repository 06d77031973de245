#pragma once

#include <vector>

namespace laprat {

// Truncated Taylor coefficients at 0; coeffs[i] multiplies t^i.
struct PowerSeries {
    std::vector<double> coeffs;

    PowerSeries() = default;
    explicit PowerSeries(std::vector<double> c) : coeffs(std::move(c)) {}

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator[](int i) const { return coeffs[static_cast<size_t>(i)]; }
};

}  // namespace laprat
