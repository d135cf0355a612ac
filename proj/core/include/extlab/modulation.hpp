#ifndef EXTLAB_MODULATION_HPP
#define EXTLAB_MODULATION_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "extlab/frame.hpp"
#include "extlab/geometry.hpp"

namespace extlab {

// Smooth tensor cutoff: 1 on the plateau cube, 0 outside the support cube,
// C^r transitions (flat-ended polynomial smoothstep per axis).
struct CutoffPsi {
    int dim = 1;
    Cube support = Cube::unit(1);
    Cube plateau = Cube::unit(1).dilated(0.25);
    int r = 4;

    double eval1(int axis, double x) const;
    double eval(const Point& x) const;
};

CutoffPsi make_psi(const Cube& support, double plateau_fraction, int r);

// Everything the modulated machinery needs in one place.
struct ModConfig {
    const AlpertFamily* family = nullptr;
    const Mollifier* moll = nullptr;
    double eta = 1.0 / 64.0;
    int dim = 1;  // = d - 1
    int s = 3;
    Cube U = Cube(1, {0.0}, 0.25);  // test cube, psi support inside
    CutoffPsi psi;
    bool dyadic_norm = false;  // "harmless liberty" 2^{-s dim/2} amplitude
    double neumann_tol = 1e-8;
    int neumann_max_terms = 400;
    QuadratureSpec quad;

    Lattice lattice() const { return Lattice(dim, s); }
    double phi_amp() const;  // (2N+1)^{-dim/2} or 2^{-s dim/2}
};

// Canonical single-scale cube family indexed by the lattice: J_k =
// 2^{-s}(k + [0,1)^dim) + nu, k over Gamma_s, in lattice flat order.
std::vector<Cube> lattice_cubes(const Lattice& lat, const Point& nu);

// Angular carrier frequency of channel m = 2^{-s} k': per axis
// omega_i = 2 pi 2^s k'_i / (2N+1).  (The (2N+1) divisor is what makes the
// modulated sequences below an orthonormal basis on the lattice.)
Point channel_omega(const Lattice& lat, const std::vector<std::int64_t>& kprime);

// phi^m entry at a cube center.
cd mod_phi(const ModConfig& mc, const Point& omega, const Point& center);

// <a, phi^m> for all m: values m-major x member.  Orthonormal transform:
// Parseval and perfect reconstruction hold to roundoff.
struct ModCoeffs {
    Lattice lat{1, 0};
    int members = 1;
    std::vector<cd> values;
    cd at(std::int64_t mflat, int member) const {
        return values[static_cast<std::size_t>(mflat) * members + member];
    }
    std::string to_csv() const;  // m..., member, re, im
};
ModCoeffs decompose(const CoeffSeq& a, const ModConfig& mc);
CoeffSeq reconstruct(const ModCoeffs& m, const ModConfig& mc, const Point& nu);

// Pointwise multiplier on coefficient sequences: b_n -> psi(c_n) b_n.
CoeffSeq multiplier_M_psi(const CoeffSeq& b, const CutoffPsi& psi);

// Frame coefficients of f over the canonical lattice cubes of grid D + v
// (single scale s); lattice flat order x member.
CoeffSeq lattice_coeffs(const TestFunction& f, const ModConfig& mc, const Point& v,
                        NeumannInfo* info = nullptr);

// A_m(v) = <a^{f,D+v}, phi^m>, one entry per family member.
std::vector<cd> channel_A(const TestFunction& f, const ModConfig& mc, const Point& v,
                          const std::vector<std::int64_t>& kprime);

// g_m for one family member as an explicit smooth-Alpert expansion at grid
// shift nu: sum_k psi(c_k) phi^m(c_k) h_{J_k}.
TestFunction build_g_m(const ModConfig& mc, const std::vector<std::int64_t>& kprime,
                       int member, const Point& nu);

// Trigonometric interpolation of a smooth periodic function sampled on a
// uniform grid over [0, P)^dim (dim <= 2, odd sample counts).
class PeriodicInterpolant {
public:
    PeriodicInterpolant(int dim, double period, int n_per_axis,
                        const std::function<std::vector<cd>(const Point&)>& F,
                        int channels);

    int channels() const { return channels_; }
    std::vector<cd> eval(const Point& y) const;
    cd eval1(int channel, const Point& y) const;

    // Fourier coefficient against e^{2 pi i j . y / P}.
    cd fourier(int channel, const std::vector<int>& j) const;

private:
    int dim_, n_, channels_;
    double period_;
    std::vector<cd> coef_;  // [channel][j-flat], j per axis in [-(n-1)/2, (n-1)/2]
};

} // namespace extlab

#endif
