#ifndef EXTLAB_SMOOTH_WAVELET_HPP
#define EXTLAB_SMOOTH_WAVELET_HPP

#include <complex>
#include <vector>

#include "extlab/alpert.hpp"
#include "extlab/geometry.hpp"
#include "extlab/mollifier.hpp"
#include "extlab/quadrature.hpp"

namespace extlab {

// h_{Q;kappa}^{a,eta} = h_{Q;kappa}^a * phi_{eta l(Q)}.  Evaluation is exact:
// the convolution of a piecewise polynomial with the polynomial bump reduces
// to partial bump moments over clipped boxes.  Translation/dilation
// covariant, so everything is computed on the mother cube.
struct SmoothWavelet {
    const AlpertFamily* family = nullptr;
    const Mollifier* moll = nullptr;
    int member = 0;
    Cube Q;
    double eta = 0.015625;  // 2^-6
    bool smooth = true;     // false: the plain Alpert wavelet on Q

    double eval(const Point& x) const;

    // Support box (the (1+2 eta)-dilate of Q for smooth wavelets).
    Cube support() const;

    // Axis breakpoints (global coordinates): the wavelet is a single
    // polynomial on every cell of the grid these induce.
    std::vector<double> axis_breakpoints(int axis) const;

    // Polynomial degree bound per cell (for exact Gauss orders).
    int cell_degree() const;
};

SmoothWavelet smooth_wavelet(const AlpertFamily& family, int member, const Cube& Q,
                             double eta, const Mollifier& moll);
SmoothWavelet plain_wavelet(const AlpertFamily& family, int member, const Cube& Q);

// int w(x) x^beta dx by composite Gauss respecting piece boundaries, with a
// step-halving agreement check (QuadratureError on disagreement).
double moment(const SmoothWavelet& w, const std::vector<int>& beta,
              const QuadratureSpec& quad);

// L^2 pairing of two (possibly plain) wavelets in the same dimension.
double inner_product(const SmoothWavelet& a, const SmoothWavelet& b,
                     const QuadratureSpec& quad);

// <f, w> for a complex-valued integrand given as a callable with support box.
std::complex<double> inner_product_fn(
    const std::function<std::complex<double>(const Point&)>& f, const Cube& f_support,
    const SmoothWavelet& w, const QuadratureSpec& quad);

} // namespace extlab

#endif
