#ifndef EXTLAB_POLYNOMIAL_HPP
#define EXTLAB_POLYNOMIAL_HPP

#include <vector>

#include "extlab/geometry.hpp"

namespace extlab {

// Multivariate polynomial stored as a list of monomials.  Small and generic;
// everything in this library has total degree well under 30.
class Poly {
public:
    struct Term {
        std::vector<int> exps;  // length dim
        double c = 0.0;
    };

    Poly() = default;
    explicit Poly(int dim) : dim_(dim) {}
    static Poly constant(int dim, double value);
    static Poly monomial(int dim, const std::vector<int>& exps, double c);

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    int total_degree() const;

    void add_term(const std::vector<int>& exps, double c);
    Poly operator+(const Poly& other) const;
    Poly operator-(const Poly& other) const;
    Poly operator*(const Poly& other) const;
    Poly scaled(double a) const;

    double eval(const Point& x) const;

    // Substitute x_i = a_i + b_i * u_i; returns a polynomial in u.
    Poly affine_substitute(const Point& a, const Point& b) const;

    // d/dx_axis.
    Poly derivative(int axis) const;

    // Exact integral over a box.
    double integrate(const Cube& box) const;

    // Exact integral of this * x^beta over a box.
    double integrate_against_monomial(const Cube& box, const std::vector<int>& beta) const;

    // Drop terms with |c| below tol and merge duplicates.
    void compress(double tol = 0.0);

private:
    int dim_ = 0;
    std::vector<Term> terms_;
};

// n-th power helper for small integers.
double ipow(double x, int n);

} // namespace extlab

#endif
