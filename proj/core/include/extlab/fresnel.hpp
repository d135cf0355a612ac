#ifndef EXTLAB_FRESNEL_HPP
#define EXTLAB_FRESNEL_HPP

#include <complex>
#include <vector>

namespace extlab {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), any z (Weideman's rational
// approximation on the upper half plane, reflection below).
std::complex<double> faddeeva_w(std::complex<double> z);

// F(x) = int_0^x exp(-i t^2) dt, real x.  F(inf) = sqrt(pi)/2 exp(-i pi/4).
std::complex<double> fresnel_e(double x);

// Polynomial on [lo, hi] with coefficients around a local center:
// P(z) = sum_p coef[p] (z - c0)^p.
struct PiecePoly {
    double lo = 0, hi = 0, c0 = 0;
    std::vector<double> coef;

    double eval(double z) const;
    PiecePoly recentered(double c_new) const;  // stable (interpolatory) re-expansion
    PiecePoly restricted(double a, double b) const;
};

// int_lo^hi P(z) exp(i beta z) exp(-i gamma (z + a)^2) dz, computed by the
// branch appropriate to the regime (power series for weak phases, recentered
// Fresnel moments near the stationary point, asymptotic integration by parts
// with Gauss-panel fallback far from it).  gamma may be any real, beta any
// real; accuracy ~1e-12 relative to the amplitude scale.
std::complex<double> osc_quadratic_piece(const PiecePoly& P, double beta,
                                         double gamma, double a);

// Sum over pieces.
std::complex<double> osc_quadratic_integral(const std::vector<PiecePoly>& pieces,
                                            double beta, double gamma, double a);

// J_n(t0, t1) = int_{t0}^{t1} t^n exp(-i t^2) dt, n = 0..nmax, |t| moderate.
std::vector<std::complex<double>> fresnel_moments(double t0, double t1, int nmax);

} // namespace extlab

#endif
