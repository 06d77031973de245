#pragma once

#include <complex>
#include <vector>

#include "laprat/fnmodel.hpp"

namespace laprat::detail {

// c * t^k * e^{r t} with complex c, r. Real trig terms expand to conjugate
// pairs here; products and powers are exact in this form.
struct CxTerm {
    std::complex<double> coeff;
    int tpow = 0;
    std::complex<double> rate;
};

std::vector<CxTerm> to_complex(const std::vector<ExpPolyTerm>& terms);
std::vector<ExpPolyTerm> from_complex(std::vector<CxTerm> cx);

std::vector<CxTerm> merge(std::vector<CxTerm> cx);
std::vector<CxTerm> mul(const std::vector<CxTerm>& a, const std::vector<CxTerm>& b);
std::vector<CxTerm> pow(const std::vector<CxTerm>& a, int k);

// Substitute t -> t + s.
std::vector<CxTerm> shift(const std::vector<CxTerm>& a, double s);

}  // namespace laprat::detail
