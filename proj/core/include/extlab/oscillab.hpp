#ifndef EXTLAB_OSCILLAB_HPP
#define EXTLAB_OSCILLAB_HPP

#include <complex>
#include <functional>
#include <vector>

#include "extlab/fresnel.hpp"
#include "extlab/geometry.hpp"
#include "extlab/quadrature.hpp"

namespace extlab {

using cd = std::complex<double>;

// A 1-periodic amplitude given as a callable, with numerically estimated
// derivative bounds (central differences with one Richardson refinement).
struct PeriodicAmplitude {
    int dim = 1;
    std::function<cd(const Point&)> phi;

    bool check_periodicity(double tol = 1e-10, int samples = 64) const;
    double cnorm_estimate(int tau, double step = 1e-3, int samples = 64) const;
};

// Finite Fourier sum sum_{|k|_inf <= K} c_k e^{2 pi i k.z}; the working
// representation for the exact evaluation route.
struct HarmonicAmplitude {
    int dim = 1;
    int K = 0;
    std::vector<cd> coef;  // flat, k per axis in [-K, K]

    static HarmonicAmplitude zero(int dim, int K);
    cd& at(const std::vector<int>& k);
    cd get(const std::vector<int>& k) const;
    cd eval(const Point& z) const;
    double cnorm(int tau) const;  // sum |c_k| |2 pi k|_2^tau
};

// phi_hat(k) = int_{[-1/2,1/2]^dim} phi e^{-2 pi i k.z} dz by the trapezoid
// rule with >= 8K points per axis (spectrally accurate for smooth phi).
HarmonicAmplitude fourier_coeffs(const PeriodicAmplitude& phi, int K);

// The cutoff psi(z/N) of the periodic lemmas: 1 on [-N, N], 0 outside
// [-2N, 2N], C^r polynomial transitions; returned as exact pieces.
std::vector<PiecePoly> psp_cutoff_pieces(double N, int r);

// I = int psi(z/N) e^{i beta.z} phi(z) e^{-i gamma_ang |z+a|^2} dz over
// R^dim, phi as a finite Fourier sum, evaluated exactly per harmonic
// (tensorizes across axes).  gamma_ang is the angular quadratic coefficient.
cd psp_integral_harmonic(const HarmonicAmplitude& phi, int psi_r, double N,
                         const Point& beta, double gamma_ang, const Point& a);

// Same integral by oscillatory panel quadrature (dim = 1; cross-check route).
cd psp_integral_direct(const HarmonicAmplitude& phi, int psi_r, double N,
                       double beta, double gamma_ang, double a,
                       const QuadratureSpec& quad);

struct RapidDecayRow {
    double a;
    double absI;
    double envelope;      // (1/(2 gamma a))^{tau-1} * min{...} * norms
    double trivial_bound; // N^{d-1} ||phi||_inf
    double ratio;         // absI / envelope
    bool envelope_binding;
};

// Scan of the Periodic Rapid Decay Lemma: the lemma's phase is
// e^{-2 pi i gamma |z+a|^2}, |a| >= 4N.
std::vector<RapidDecayRow> rapid_decay_scan(const HarmonicAmplitude& phi, int psi_r,
                                            double N, double gamma,
                                            const std::vector<double>& a_values,
                                            int tau);

struct ImprovedRow {
    double theta;
    int s;
    double absI;
    double psp_bound;     // min{gamma^{-(d-1)/2}, N^{d-1}} * ||phi||_Cd
    double moment_factor; // (2^{-delta s})^{tau' theta}
    double bound;         // moment_factor^... * psp_bound^{1-theta}
    double C_measured;    // absI / bound
};

// Geometric-mean shape of the Improved Periodic Lemma, measured.
ImprovedRow improved_scan(const HarmonicAmplitude& phi, int psi_r, double N,
                          double gamma_ang, const Point& beta, const Point& a,
                          double theta, double delta, int s, int tau_prime);

} // namespace extlab

#endif
