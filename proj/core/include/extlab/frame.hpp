#ifndef EXTLAB_FRAME_HPP
#define EXTLAB_FRAME_HPP

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "extlab/geometry.hpp"
#include "extlab/smooth_wavelet.hpp"

namespace extlab {

using cd = std::complex<double>;

// Complex coefficient sequence over the cubes of one scale, one entry per
// (cube, family member) pair, cube-major.
struct CoeffSeq {
    int s = 0;
    std::vector<Cube> cubes;
    int members = 1;
    std::vector<cd> values;

    std::size_t size() const { return values.size(); }
    cd& at(std::size_t cube, int member) { return values[cube * members + member]; }
    cd at(std::size_t cube, int member) const { return values[cube * members + member]; }

    double lq_norm(double q) const;  // 1 <= q (q = inf not needed at desk scale)
    std::string to_csv() const;      // cube center..., member, re, im
};

struct FrameConfig {
    Grid grid;  // the translated dyadic grid D + v
    const AlpertFamily* family = nullptr;
    const Mollifier* moll = nullptr;
    double eta = 1.0 / 64.0;
    int s_min = 3, s_max = 3;  // active scale window
    Cube region = Cube::unit(1);
    double neumann_tol = 1e-8;
    int neumann_max_terms = 400;
    QuadratureSpec quad;
};

// A function fed to the frame operators: a callable with a support box, or a
// smooth-Alpert expansion (kept exact so inner products reduce to
// wavelet-wavelet pairings).
struct TestFunction {
    struct ExpTerm {
        Cube cube;
        int member = 0;
        cd coeff;
    };

    bool is_expansion = false;
    std::function<cd(const Point&)> fn;
    Cube support = Cube::unit(1);
    // expansion data
    const AlpertFamily* family = nullptr;
    const Mollifier* moll = nullptr;
    double eta = 0.0;
    std::vector<ExpTerm> terms;

    cd eval(const Point& x) const;

    static TestFunction callable(std::function<cd(const Point&)> f, Cube support);
    static TestFunction expansion(const AlpertFamily& fam, const Mollifier& moll,
                                  double eta, std::vector<ExpTerm> terms);
};

struct NeumannInfo {
    int terms = 0;
    double last_ratio = 0.0;
    double last_increment = 0.0;
};

// The truncated frame: active smooth wavelets on the configured scale window
// and region (or an explicit single-scale cube list), their Gram matrix and
// the Neumann machinery for T^{-1} on it.
class FrameState {
public:
    explicit FrameState(const FrameConfig& cfg);
    FrameState(const FrameConfig& cfg, std::vector<Cube> single_scale_cubes);

    const FrameConfig& config() const { return cfg_; }
    int n_wavelets() const { return static_cast<int>(flat_.size()); }
    int members() const;
    const std::vector<Cube>& cubes() const { return cubes_; }
    SmoothWavelet wavelet(int flat) const;
    int flat_index(std::size_t cube, int member) const;

    // <f, h_i> for every active wavelet (parallel; memoized pairings for
    // expansions keyed by relative cube offset).
    std::vector<cd> analyze(const TestFunction& f) const;

    // Gram G_ij = <h_j, h_i> (real symmetric), built lazily.
    const std::vector<double>& gram() const;  // row-major n x n

    // Neumann solve c = sum_k (I-G)^k b; throws ConvergenceError when the
    // increment fails to contract within the configured budget.
    std::vector<cd> neumann_solve(const std::vector<cd>& b, NeumannInfo* info) const;

    cd synth(const std::vector<cd>& c, const Point& x) const;

    // ||sum c_i h_i||_2 through the Gram quadratic form.
    double expansion_l2(const std::vector<cd>& c) const;

private:
    void build(std::vector<Cube> cubes_by_scale);
    FrameConfig cfg_;
    std::vector<Cube> cubes_;
    std::vector<std::pair<int, int>> flat_;  // (cube index, member)
    mutable std::vector<double> gram_;
    mutable std::once_flag gram_once_;
};

// (T f)(x) truncated to the configured window.
cd apply_T(const TestFunction& f, const Point& x, const FrameState& state);

// Sum_{n<=M} (I-T)^n f evaluated at x, M chosen by the increment criterion.
cd apply_T_inverse(const TestFunction& f, const Point& x, const FrameState& state,
                   NeumannInfo* info = nullptr);

// Coefficients <T^{-1} f, h_J> for J in G_s[U] (plus the evaluable function
// through FrameState::synth on the returned coefficients).
CoeffSeq pseudoprojection_Q(const TestFunction& f, const FrameState& state,
                            NeumannInfo* info = nullptr);

// L^q norm of the scale-s pseudoprojection divided by
// 2^{s dim (1/2 - 1/q)} |f_coeffs|_{l^q}; one entry per s in [s_lo, s_hi].
struct NormScalingRow {
    int s;
    double lq_norm;
    double coeff_lq;
    double ratio;
};
std::vector<NormScalingRow> norm_scaling(const TestFunction& f, double q, int s_lo,
                                         int s_hi, const FrameConfig& base_cfg);

// Central finite-difference estimate of |d^alpha/dv^alpha <T^-1_{D+v} f,
// h_{J'+v}>| over sampled shifts v (J' a base cube of the standard grid).
struct LambdaSmoothness {
    double max_derivative;
    double ratio_to_scale;  // / (2^{|alpha| s} ||f||_2-ish reference)
};
LambdaSmoothness lambda_smoothness(const TestFunction& f, const Cube& base_cube,
                                   int member, const std::vector<int>& alpha,
                                   double step, const FrameConfig& cfg,
                                   const std::vector<Point>& v_samples);

} // namespace extlab

#endif
