#ifndef EXTLAB_EXTENSION_HPP
#define EXTLAB_EXTENSION_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "extlab/modulation.hpp"
#include "extlab/sampler.hpp"

namespace extlab {

// A frequency point xi = (xi', xi_d) for the extension operator
// E f(xi) = int e^{-i xi . Phi(x)} f(x) dx, Phi(x) = (x, |x|^2).
struct Freq {
    Point xi_prime;
    double xi_d = 0.0;

    double lambda() const { return xi_d; }
    double norm() const;

    // beta_m(x) = omega(m) - xi' - 2 xi_d x (the full linear phase of the
    // lattice sum in channel m), and alpha_m = beta_m / (2 lambda).
    Point beta(const Point& omega, const Point& x) const;
    Point alpha(const Point& omega, const Point& x) const;
};

// E f(xi) by oscillatory panel quadrature over the support of f.
cd extend(const TestFunction& f, const Freq& xi, const QuadratureSpec& quad);

// E h_{J}^{member,eta}(xi) via the factored form
// e^{-i xi'.c} e^{-i xi_d |c|^2} int e^{-i(xi' + 2 xi_d c).x} e^{-i xi_d |x|^2} h_s(x) dx.
cd extend_wavelet_factored(const ModConfig& mc, const Cube& J, int member,
                           const Freq& xi, const QuadratureSpec& quad);

// int e^{-i q.x} e^{-i lambda |x|^2} h_s^{member,eta}(x) dx with h_s the
// mother wavelet at scale s centered at the origin.
cd mother_osc_integral(const ModConfig& mc, int member, const Point& q, double lambda,
                       const QuadratureSpec& quad);

// The lattice exponential sum Omega^m(xi, x, G) over the canonical cubes,
// with its completed-square form; the two are asserted equal to 1e-10.
struct OmegaSum {
    cd direct;
    cd completed;
    cd prefactor;  // e^{i |beta|^2 / (4 lambda)} (lambda != 0)
};
OmegaSum exp_sum_omega(const ModConfig& mc, const std::vector<std::int64_t>& kprime,
                       const Freq& xi, const Point& x, const Point& nu);

// Coefficient sequences of f at a uniform grid of shifts over one period
// [0, 2^{-s})^dim; everything channel-related is derived from these.
class ShiftSamples {
public:
    ShiftSamples(const TestFunction& f, const ModConfig& mc, int n_per_axis);

    const ModConfig& config() const { return mc_; }
    int n_per_axis() const { return n_; }

    // A_m at the j-th sample shift (flat index over the sample grid).
    std::vector<cd> A_at(std::int64_t flat, const std::vector<std::int64_t>& kprime) const;
    const CoeffSeq& coeffs_at(std::int64_t flat) const { return samples_[flat]; }
    Point shift_at(std::int64_t flat) const;
    std::int64_t n_samples() const { return static_cast<std::int64_t>(samples_.size()); }

    // Trig interpolant of nu -> A_m(nu) (one channel per family member).
    PeriodicInterpolant interpolant(const std::vector<std::int64_t>& kprime) const;

private:
    ModConfig mc_;
    int n_;
    std::vector<CoeffSeq> samples_;
};

// Gamma^m(xi, x) = E_G[ A_m(nu) Omega^m(xi, x, nu) ], one entry per family
// member, by direct averaging over sampled shifts.
std::vector<cd> averaged_gamma_direct(const ShiftSamples& shifts,
                                      const std::vector<std::int64_t>& kprime,
                                      const Freq& xi, const Point& x);

// The same quantity as a single oscillatory integral with periodic amplitude:
// 2^{s dim} int (A~_m psi)(y) e^{i beta~.y} e^{-i lambda |y|^2} dy.
std::vector<cd> averaged_gamma_oscillatory(const PeriodicInterpolant& A_interp,
                                           const ModConfig& mc,
                                           const std::vector<std::int64_t>& kprime,
                                           const Freq& xi, const Point& x,
                                           const QuadratureSpec& quad);

enum class ExtensionRoute {
    gamma_x,      // integrate Gamma(xi, x) against the mother wavelet (all xi)
    which_gives,  // the w-integral form (requires xi_d != 0)
    collapsed,    // the same integral in the y variable (valid at xi_d = 0 too)
    bruteforce    // E_v[ <a, phi^m> E g_m(xi) ] by sampling grids
};

// E_G <a^{f,G}, phi^m> E g_m(xi).
cd averaged_extension(const ShiftSamples& shifts,
                      const std::vector<std::int64_t>& kprime, const Freq& xi,
                      ExtensionRoute route, const QuadratureSpec& quad);

// sum over all m in Gamma_s; equals E_G[E M_psi Q_{s,U} f](xi).
cd sum_over_m(const ShiftSamples& shifts, const Freq& xi, ExtensionRoute route,
              const QuadratureSpec& quad);

// E[E M_psi Q f](xi) computed directly (no channel decomposition).
cd averaged_extension_direct(const ShiftSamples& shifts, const Freq& xi,
                             const QuadratureSpec& quad);

// The smooth coefficient field y -> <T^{-1}_{D+nu(y)} f, h at the cube
// centered y>, assembled from shift samples on a uniform y-grid (dim 1).
class CoeffField {
public:
    explicit CoeffField(const ShiftSamples& shifts);
    int members() const { return members_; }
    cd eval(int member, double y) const;  // cubic interpolation
    double y_min() const { return y0_; }
    double y_max() const { return y0_ + step_ * (count_ - 1); }

private:
    int members_ = 1;
    double y0_ = 0.0, step_ = 1.0;
    std::int64_t count_ = 0;
    std::vector<cd> values_;  // y-major x member
};

// E_G[E M_psi Q f](xi) as a single collapsed integral over the coefficient
// field (dim 1); the fast path for norm scans.
cd averaged_field_extension(const CoeffField& field, const ModConfig& mc,
                            const Freq& xi, const QuadratureSpec& quad);

// W(q, lambda) = mother_osc_integral at Chebyshev nodes in q, evaluated by
// barycentric interpolation.  W varies on the q-scale 2^s, so a norm scan
// can share one table across a whole row of frequencies.
class MotherOscTable {
public:
    MotherOscTable(const ModConfig& mc, int member, double lambda, double qmin,
                   double qmax, const QuadratureSpec& quad, int min_nodes = 20);
    cd eval(double q) const;

private:
    int n_;
    double mid_, half_;
    std::vector<double> nodes_;
    std::vector<cd> vals_;
};

// Collapsed-route evaluations with caller-provided W tables (one per family
// member, spanning the needed q-range at this lambda).
cd channel_collapsed_with_tables(const PeriodicInterpolant& A_interp,
                                 const ModConfig& mc,
                                 const std::vector<std::int64_t>& kprime,
                                 const Freq& xi,
                                 const std::vector<const MotherOscTable*>& W,
                                 const QuadratureSpec& quad);
cd field_collapsed_with_tables(const CoeffField& field, const ModConfig& mc,
                               const Freq& xi,
                               const std::vector<const MotherOscTable*>& W,
                               const QuadratureSpec& quad);

} // namespace extlab

#endif
