#ifndef EXTLAB_ALPERT_HPP
#define EXTLAB_ALPERT_HPP

#include <string>
#include <vector>

#include "extlab/geometry.hpp"
#include "extlab/polynomial.hpp"

namespace extlab {

// Multi-indices of total degree <= deg, in graded lexicographic order.
std::vector<std::vector<int>> monomials_up_to(int dim, int deg);

// Piecewise polynomial on the 2^dim children of a cube.  Pieces are stored
// in the coordinates of the mother cube (unit cube centered at the origin);
// child index bit i set means the upper half along axis i.
struct PiecewisePolynomial {
    int dim = 1;
    Cube supportCube;          // mother cube, unit centered by construction
    std::vector<Poly> pieces;  // size 2^dim

    double eval_unit(const Point& u) const;  // 0 outside the mother cube

    // Evaluate the translate/dilate to cube Q with L^2 normalization
    // ell(Q)^{-dim/2}.
    double eval_on_cube(const Cube& Q, const Point& x) const;

    int child_of(const Point& u) const;  // -1 if outside
};

// Orthonormal basis of the moment-vanishing space on the children of the
// unit cube: piecewise polynomials of total degree <= kappa-1 with
// int f x^alpha = 0 for all |alpha| <= kappa-1.
struct AlpertFamily {
    int dim = 1;
    int kappa = 1;
    std::vector<PiecewisePolynomial> members;

    int size() const { return static_cast<int>(members.size()); }
};

// Assemble the moment-constraint nullspace and orthonormalize it (modified
// Gram-Schmidt with re-orthogonalization).  Throws IllConditionedError when
// the constraint system is rank-deficient at working precision.
AlpertFamily build_alpert_family(int dim, int kappa);

// Expected member count: (2^dim - 1) * #monomials.
int alpert_dimension(int dim, int kappa);

// JSON cache format; exact floating-point round trip.
std::string family_to_json(const AlpertFamily& f);
AlpertFamily family_from_json(const std::string& text);

} // namespace extlab

#endif
