#include "extlab/oscillab.hpp"

#include <algorithm>
#include <cmath>

#include "extlab/errors.hpp"
#include "extlab/polynomial.hpp"
#include "extlab/rng.hpp"

namespace extlab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

bool PeriodicAmplitude::check_periodicity(double tol, int samples) const {
    Rng rng(1234);
    for (int t = 0; t < samples; ++t) {
        Point z(dim), zs(dim);
        for (int i = 0; i < dim; ++i) {
            z[i] = rng.uniform(-0.5, 0.5);
            zs[i] = z[i] + static_cast<double>(1 + (rng.bits() % 3));
        }
        if (std::abs(phi(z) - phi(zs)) > tol) return false;
    }
    return true;
}

double PeriodicAmplitude::cnorm_estimate(int tau, double step, int samples) const {
    // Pure-axis central differences of order tau, Richardson-refined once.
    auto fd = [&](const Point& z, int axis, double h) {
        cd s = 0.0;
        for (int j = 0; j <= tau; ++j) {
            Point zz = z;
            zz[axis] += (0.5 * tau - j) * h;
            s += std::pow(-1.0, j) * binom(tau, j) * phi(zz);
        }
        return std::abs(s) / ipow(h, tau);
    };
    double best = 0.0;
    Rng rng(99);
    for (int t = 0; t < samples; ++t) {
        Point z(dim);
        for (int i = 0; i < dim; ++i) z[i] = rng.uniform(0.0, 1.0);
        for (int axis = 0; axis < dim; ++axis) {
            if (tau == 0) {
                best = std::max(best, std::abs(phi(z)));
                continue;
            }
            const double d1 = fd(z, axis, step);
            const double d2 = fd(z, axis, 0.5 * step);
            best = std::max(best, std::abs((4.0 * d2 - d1) / 3.0));
        }
    }
    return best;
}

HarmonicAmplitude HarmonicAmplitude::zero(int dim, int K) {
    HarmonicAmplitude h;
    h.dim = dim;
    h.K = K;
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= 2 * K + 1;
    h.coef.assign(n, cd{});
    return h;
}

cd& HarmonicAmplitude::at(const std::vector<int>& k) {
    std::size_t flat = 0;
    for (int i = dim - 1; i >= 0; --i) flat = flat * (2 * K + 1) + (k[i] + K);
    return coef[flat];
}

cd HarmonicAmplitude::get(const std::vector<int>& k) const {
    std::size_t flat = 0;
    for (int i = dim - 1; i >= 0; --i) flat = flat * (2 * K + 1) + (k[i] + K);
    return coef[flat];
}

cd HarmonicAmplitude::eval(const Point& z) const {
    cd s = 0.0;
    std::vector<int> k(dim, -K);
    std::size_t flat = 0;
    while (true) {
        double phase = 0.0;
        for (int i = 0; i < dim; ++i) phase += k[i] * z[i];
        s += coef[flat] * std::polar(1.0, 2.0 * M_PI * phase);
        ++flat;
        int ax = 0;
        while (ax < dim) {
            if (++k[ax] <= K) break;
            k[ax] = -K;
            ++ax;
        }
        if (ax == dim) break;
    }
    return s;
}

double HarmonicAmplitude::cnorm(int tau) const {
    double s = 0.0;
    std::vector<int> k(dim, -K);
    std::size_t flat = 0;
    while (true) {
        double k2 = 0.0;
        for (int i = 0; i < dim; ++i) k2 += static_cast<double>(k[i]) * k[i];
        s += std::abs(coef[flat]) * ipow(2.0 * M_PI * std::sqrt(k2), tau);
        ++flat;
        int ax = 0;
        while (ax < dim) {
            if (++k[ax] <= K) break;
            k[ax] = -K;
            ++ax;
        }
        if (ax == dim) break;
    }
    return s;
}

HarmonicAmplitude fourier_coeffs(const PeriodicAmplitude& phi, int K) {
    if (K < 1) throw Error("fourier_coeffs: K must be >= 1");
    auto h = HarmonicAmplitude::zero(phi.dim, K);
    const int n = 8 * K;
    // Tensor trapezoid over [-1/2, 1/2)^dim (periodic: uniform samples).
    std::vector<int> idx(phi.dim, 0);
    std::vector<Point> pts;
    std::vector<cd> vals;
    while (true) {
        Point z(phi.dim);
        for (int i = 0; i < phi.dim; ++i) z[i] = -0.5 + static_cast<double>(idx[i]) / n;
        pts.push_back(z);
        vals.push_back(phi.phi(z));
        int ax = 0;
        while (ax < phi.dim) {
            if (++idx[ax] < n) break;
            idx[ax] = 0;
            ++ax;
        }
        if (ax == phi.dim) break;
    }
    std::vector<int> k(phi.dim, -K);
    while (true) {
        cd s = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double phase = 0.0;
            for (int i = 0; i < phi.dim; ++i) phase += k[i] * pts[p][i];
            s += vals[p] * std::polar(1.0, -2.0 * M_PI * phase);
        }
        h.at(k) = s / std::pow(static_cast<double>(n), phi.dim);
        int ax = 0;
        while (ax < phi.dim) {
            if (++k[ax] <= K) break;
            k[ax] = -K;
            ++ax;
        }
        if (ax == phi.dim) break;
    }
    return h;
}

std::vector<PiecePoly> psp_cutoff_pieces(double N, int r) {
    // Transition T(t) = 1 - R(t)/R(1), R(t) = int_0^t u^r (1-u)^r.
    Poly R(1);
    for (int j = 0; j <= r; ++j)
        R.add_term({r + j + 1},
                   binom(r, j) * (j % 2 ? -1.0 : 1.0) / (r + j + 1));
    const double R1 = R.eval({1.0});
    // T as a 1-D Poly in t.
    Poly T = Poly::constant(1, 1.0) - R.scaled(1.0 / R1);

    std::vector<PiecePoly> out;
    // Right transition: z in [N, 2N], t = z/N - 1.
    {
        Poly tz = T.affine_substitute({-1.0}, {1.0 / N});  // t = -1 + z/N
        PiecePoly P;
        P.lo = N;
        P.hi = 2.0 * N;
        P.c0 = 0.0;
        P.coef.assign(tz.total_degree() + 1, 0.0);
        for (const auto& term : tz.terms()) P.coef[term.exps[0]] = term.c;
        out.push_back(P.recentered(1.5 * N));
    }
    // Plateau.
    {
        PiecePoly P;
        P.lo = -N;
        P.hi = N;
        P.c0 = 0.0;
        P.coef = {1.0};
        out.push_back(P);
    }
    // Left transition: z in [-2N, -N], t = -z/N - 1.
    {
        Poly tz = T.affine_substitute({-1.0}, {-1.0 / N});
        PiecePoly P;
        P.lo = -2.0 * N;
        P.hi = -N;
        P.c0 = 0.0;
        P.coef.assign(tz.total_degree() + 1, 0.0);
        for (const auto& term : tz.terms()) P.coef[term.exps[0]] = term.c;
        out.push_back(P.recentered(-1.5 * N));
    }
    return out;
}

cd psp_integral_harmonic(const HarmonicAmplitude& phi, int psi_r, double N,
                         const Point& beta, double gamma_ang, const Point& a) {
    const auto pieces = psp_cutoff_pieces(N, psi_r);
    // Per-axis one-dimensional integrals are cached per distinct (beta_i + 2
    // pi k): tensorize over harmonics.
    const int dim = phi.dim;
    const int K = phi.K;
    // Precompute OneD(k, axis) for k in [-K, K].
    std::vector<std::vector<cd>> oned(dim, std::vector<cd>(2 * K + 1));
    for (int ax = 0; ax < dim; ++ax)
        for (int k = -K; k <= K; ++k)
            oned[ax][k + K] = osc_quadratic_integral(
                pieces, beta[ax] + 2.0 * M_PI * k, gamma_ang, a[ax]);

    cd total = 0.0;
    std::vector<int> k(dim, -K);
    std::size_t flat = 0;
    while (true) {
        if (phi.coef[flat] != cd{}) {
            cd prod = phi.coef[flat];
            for (int ax = 0; ax < dim; ++ax) prod *= oned[ax][k[ax] + K];
            total += prod;
        }
        ++flat;
        int ax = 0;
        while (ax < dim) {
            if (++k[ax] <= K) break;
            k[ax] = -K;
            ++ax;
        }
        if (ax == dim) break;
    }
    return total;
}

cd psp_integral_direct(const HarmonicAmplitude& phi, int psi_r, double N,
                       double beta, double gamma_ang, double a,
                       const QuadratureSpec& quad) {
    if (phi.dim != 1) throw DimensionError("psp_integral_direct: dim 1 only");
    const auto pieces = psp_cutoff_pieces(N, psi_r);
    auto psival = [&](double z) {
        for (const auto& P : pieces)
            if (z >= P.lo && z <= P.hi) return P.eval(z);
        return 0.0;
    };
    auto f = [&](double z) {
        return psival(z) * phi.eval({z}) *
               std::polar(1.0, beta * z - gamma_ang * (z + a) * (z + a));
    };
    auto freq = [&](double z) {
        return std::abs(beta) + 2.0 * M_PI * phi.K +
               2.0 * std::abs(gamma_ang) * std::abs(z + a) + 1e-6;
    };
    return integrate_oscillatory(f, -2.0 * N, 2.0 * N, freq, {-N, N}, quad);
}

std::vector<RapidDecayRow> rapid_decay_scan(const HarmonicAmplitude& phi, int psi_r,
                                            double N, double gamma,
                                            const std::vector<double>& a_values,
                                            int tau) {
    // Lemma phase: e^{-2 pi i gamma |z+a|^2}.
    const double g_ang = 2.0 * M_PI * gamma;
    const double c_tau = phi.cnorm(tau);
    const double c_tau1 = phi.cnorm(tau - 1);
    const double c_inf = phi.cnorm(0);
    std::vector<RapidDecayRow> rows;
    for (double a : a_values) {
        RapidDecayRow row;
        row.a = a;
        Point beta(phi.dim, 0.0), av(phi.dim, 0.0);
        av[0] = a;  // shift along the first axis
        row.absI = std::abs(psp_integral_harmonic(phi, psi_r, N, beta, g_ang, av));
        const double dimfac = 0.5 * phi.dim;  // (d-1)/2 with dim = d-1
        const double stat = std::min(std::pow(gamma, -dimfac) * c_tau1,
                                     std::pow(N, phi.dim));
        row.envelope = std::pow(1.0 / (2.0 * gamma * std::abs(a)), tau - 1) * c_tau * stat;
        row.trivial_bound = std::pow(N, phi.dim) * c_inf;
        row.envelope_binding = row.envelope < row.trivial_bound;
        row.ratio = row.absI / std::max(row.envelope, 1e-300);
        rows.push_back(row);
    }
    return rows;
}

ImprovedRow improved_scan(const HarmonicAmplitude& phi, int psi_r, double N,
                          double gamma_ang, const Point& beta, const Point& a,
                          double theta, double delta, int s, int tau_prime) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw ConfigError("improved_scan: need 0 < theta < 1");
    ImprovedRow row;
    row.theta = theta;
    row.s = s;
    row.absI = std::abs(psp_integral_harmonic(phi, psi_r, N, beta, gamma_ang, a));
    const double dimfac = 0.5 * phi.dim;
    row.psp_bound =
        std::min(std::pow(std::abs(gamma_ang), -dimfac), std::pow(N, phi.dim)) *
        phi.cnorm(phi.dim + 1);
    row.moment_factor = std::pow(std::pow(2.0, -delta * s), tau_prime * theta);
    row.bound = row.moment_factor * std::pow(row.psp_bound, 1.0 - theta);
    row.C_measured = row.absI / std::max(row.bound, 1e-300);
    return row;
}

} // namespace extlab
