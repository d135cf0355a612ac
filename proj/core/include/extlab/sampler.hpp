#ifndef EXTLAB_SAMPLER_HPP
#define EXTLAB_SAMPLER_HPP

#include <complex>
#include <cstdint>
#include <functional>

#include "extlab/geometry.hpp"

namespace extlab {

// How to average a function of the grid shift over [-1,1]^dim.
//  - lattice: tensor midpoint rule, n points per axis (spectrally accurate
//    for smooth periodic integrands);
//  - montecarlo: n seeded uniform samples.
struct ShiftSampler {
    enum class Mode { lattice, montecarlo };
    Mode mode = Mode::lattice;
    int n = 64;
    std::uint64_t seed = 0;

    // When the caller asserts that F has period 2^{-s} in every component,
    // set periodic_scale = s to average over [0, 2^{-s})^dim instead of
    // [-1,1]^dim.  Negative means no reduction.
    int periodic_scale = -1;

    static ShiftSampler lattice(int n, int periodic_scale = -1) {
        return {Mode::lattice, n, 0, periodic_scale};
    }
    static ShiftSampler montecarlo(int n, std::uint64_t seed, int periodic_scale = -1) {
        return {Mode::montecarlo, n, seed, periodic_scale};
    }
};

// Average of F over the shift domain (uniform probability measure).
// Evaluations of F at distinct sample points are independent and run under
// the parallel-map contract with a deterministic summation order.
std::complex<double> grid_expectation(
    int dim, const std::function<std::complex<double>(const Point&)>& F,
    const ShiftSampler& sampler);

} // namespace extlab

#endif
