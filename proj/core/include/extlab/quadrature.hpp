#ifndef EXTLAB_QUADRATURE_HPP
#define EXTLAB_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

#include "extlab/geometry.hpp"

namespace extlab {

// Resolution contract for oscillatory quadrature.
struct QuadratureSpec {
    double points_per_wavelength = 8.0;  // >= 4 (Nyquist margin)
    int max_panels = 200000;
    double tol = 1e-9;  // step-halving agreement target
    enum class Mode { tensor_gauss, adaptive } mode = Mode::tensor_gauss;
    int gauss_order = 8;

    void validate() const;
};

// Gauss-Legendre nodes/weights on [-1,1]; cached per order.
const std::vector<double>& gauss_nodes(int order);
const std::vector<double>& gauss_weights(int order);

using Real1D = std::function<double(double)>;
using Cplx1D = std::function<std::complex<double>(double)>;
using CplxND = std::function<std::complex<double>(const Point&)>;

// Composite Gauss over [a,b] split at interior breakpoints.
double integrate_cells(const Real1D& f, double a, double b,
                       const std::vector<double>& breakpoints, int gauss_order);
std::complex<double> integrate_cells_c(const Cplx1D& f, double a, double b,
                                       const std::vector<double>& breakpoints,
                                       int gauss_order);

// Oscillatory 1D integral: panels sized so that local_freq (radians per unit
// length) advances at most 2*pi/ppw per panel, further split at breakpoints.
// Throws QuadratureError when the panel budget is exhausted.
std::complex<double> integrate_oscillatory(
    const Cplx1D& f, double a, double b, const Real1D& local_freq,
    const std::vector<double>& breakpoints, const QuadratureSpec& spec);

// Tensor version over a box; local_freq gives the per-axis frequency bound
// at a point.  Used only at desk scale (dim <= 2).
std::complex<double> integrate_oscillatory_box(
    const CplxND& f, const Cube& box,
    const std::function<double(int axis)>& axis_freq_bound,
    const std::vector<std::vector<double>>& axis_breakpoints,
    const QuadratureSpec& spec);

// Step-halving wrapper: recompute with doubled panel density and require
// agreement within spec.tol * scale; returns the refined value.
std::complex<double> integrate_oscillatory_checked(
    const Cplx1D& f, double a, double b, const Real1D& local_freq,
    const std::vector<double>& breakpoints, const QuadratureSpec& spec,
    double scale);

} // namespace extlab

#endif
