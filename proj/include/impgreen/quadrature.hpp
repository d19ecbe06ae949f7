#ifndef IMPGREEN_QUADRATURE_HPP
#define IMPGREEN_QUADRATURE_HPP

#include <vector>

namespace impgreen {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// n-point Gauss-Legendre rule on [-1,1].  Rules are computed once
// (bracketing + Newton on the recurrence) and cached.
const GaussRule& gauss_legendre(int n);

// n-point Gauss-Hermite rule: int_-inf^inf e^{-t^2} f(t) dt ~ sum w_i f(t_i).
// Computed on the exponentially weighted recurrence so n up to a few
// hundred stays in range.
const GaussRule& gauss_hermite(int n);

} // namespace impgreen

#endif
