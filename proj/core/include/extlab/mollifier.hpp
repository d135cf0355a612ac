#ifndef EXTLAB_MOLLIFIER_HPP
#define EXTLAB_MOLLIFIER_HPP

#include <string>
#include <vector>

#include "extlab/polynomial.hpp"

namespace extlab {

// phi(x) = q(x) * prod_i (1 - x_i^2)_+^r on [-1,1]^dim, with unit integral
// and vanishing moments of positive order < kappa.  C^{r-1} across the
// support boundary.
struct Mollifier {
    int dim = 1;
    int kappa = 1;
    int r = 3;
    Poly q;

    double eval(const Point& x) const;

    // Partial bump moments PM_n(a, b) = int_a^b u^n (1 - u^2)^r du for
    // [a, b] within [-1, 1]; the workhorse of exact convolution.
    double partial_moment(int n, double a, double b) const;

    // Full moment int phi(x) x^gamma dx (exact).
    double moment(const std::vector<int>& gamma) const;
};

// Solve the Hankel-type system M c = e_0 over monomials |gamma| <= kappa-1.
// r >= kappa is a conditioning heuristic, not enforced.
Mollifier build_mollifier(int dim, int kappa, int r);

std::string mollifier_to_json(const Mollifier& m);
Mollifier mollifier_from_json(const std::string& text);

} // namespace extlab

#endif
