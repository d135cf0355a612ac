#include "extlab/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "extlab/errors.hpp"
#include "extlab/polynomial.hpp"
#include "extlab/quadrature.hpp"

namespace extlab {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
constexpr double SQRT_PI = 1.7724538509055160272981674833411;

// Weideman coefficients for the Faddeeva function, computed once.
const std::vector<double>& weideman_coeffs(int N, double& L_out) {
    static int cached_N = 0;
    static double cached_L = 0;
    static std::vector<double> a;
    if (cached_N != N) {
        const int M = 2 * N;
        const double L = std::sqrt(N / std::sqrt(2.0));
        std::vector<double> f(2 * M, 0.0);  // samples at theta_k, k = -M..M-1
        for (int k = -M; k < M; ++k) {
            const double theta = k * M_PI / M;
            const double c = std::cos(0.5 * theta);
            if (std::abs(c) < 1e-14) continue;  // t -> inf, f -> 0
            const double t = L * std::tan(0.5 * theta);
            f[k + M] = (L * L + t * t) * std::exp(-t * t);
        }
        a.assign(N, 0.0);
        for (int n = 1; n <= N; ++n) {
            double s = 0.0;
            for (int k = -M; k < M; ++k) {
                const double theta = k * M_PI / M;
                s += f[k + M] * std::cos(n * theta);
            }
            a[n - 1] = s / (2.0 * M);
        }
        cached_N = N;
        cached_L = L;
    }
    L_out = cached_L;
    return a;
}

cd faddeeva_upper(cd z) {
    double L;
    const auto& a = weideman_coeffs(48, L);
    const cd iz = I * z;
    const cd Z = (L + iz) / (L - iz);
    cd p = 0.0;
    for (int n = static_cast<int>(a.size()); n >= 1; --n) p = p * Z + a[n - 1];
    // p = sum_{n>=1} a_n Z^{n-1}
    return 2.0 * p / ((L - iz) * (L - iz)) + (1.0 / SQRT_PI) / (L - iz);
}

} // namespace

cd faddeeva_w(cd z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    // w(z) = 2 exp(-z^2) - w(-z)
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cd fresnel_e(double x) {
    if (x < 0) return -fresnel_e(-x);
    // (sqrt(pi)/2) e^{-i pi/4} [1 - e^{-i x^2} w(e^{i 3pi/4} x)]
    const cd phase = std::polar(1.0, -M_PI / 4.0);
    const cd arg = std::polar(x, 3.0 * M_PI / 4.0);
    const cd w = faddeeva_w(arg);
    const cd rot = std::polar(1.0, -x * x);
    return 0.5 * SQRT_PI * phase * (1.0 - rot * w);
}

std::vector<cd> fresnel_moments(double t0, double t1, int nmax) {
    // Split at |t| = 3: inside use the power series of exp(-i t^2),
    // outside the upward recursion seeded by fresnel_e.
    std::vector<cd> J(nmax + 1, 0.0);
    auto add_series = [&](double a, double b) {
        // int_a^b t^n exp(-i t^2) dt = sum_j (-i)^j / j! int t^{n+2j}
        const double tmax = std::max(std::abs(a), std::abs(b));
        for (int n = 0; n <= nmax; ++n) {
            cd term_sum = 0.0;
            cd cj = 1.0;
            for (int j = 0; j < 64; ++j) {
                const int p = n + 2 * j + 1;
                term_sum += cj * (ipow(b, p) - ipow(a, p)) / static_cast<double>(p);
                // Parity can zero individual terms, so stop on a bound.
                const double bound = std::abs(cj) * 2.0 * ipow(tmax, p) / p;
                if (bound < 1e-18 * (1.0 + std::abs(term_sum)) && j > 2) break;
                cj *= -I / static_cast<double>(j + 1);
            }
            J[n] += term_sum;
        }
    };
    auto add_recursion = [&](double a, double b) {
        std::vector<cd> Jn(nmax + 1);
        Jn[0] = fresnel_e(b) - fresnel_e(a);
        const cd eb = std::polar(1.0, -b * b), ea = std::polar(1.0, -a * a);
        if (nmax >= 1) Jn[1] = (eb - ea) / (-2.0 * I);
        for (int n = 2; n <= nmax; ++n) {
            Jn[n] = (ipow(b, n - 1) * eb - ipow(a, n - 1) * ea) / (-2.0 * I) +
                    (static_cast<double>(n - 1) / (2.0 * I)) * Jn[n - 2];
        }
        for (int n = 0; n <= nmax; ++n) J[n] += Jn[n];
    };
    // Segment [t0, t1] by the cut points -3, 3.
    double cuts[4] = {t0, std::clamp(-3.0, t0, t1), std::clamp(3.0, t0, t1), t1};
    for (int seg = 0; seg < 3; ++seg) {
        const double a = cuts[seg], b = cuts[seg + 1];
        if (b - a < 1e-300) continue;
        if (a >= -3.0 && b <= 3.0)
            add_series(a, b);
        else
            add_recursion(a, b);
    }
    return J;
}

double PiecePoly::eval(double z) const {
    const double u = z - c0;
    double r = 0.0;
    for (int p = static_cast<int>(coef.size()) - 1; p >= 0; --p) r = r * u + coef[p];
    return r;
}

PiecePoly PiecePoly::recentered(double c_new) const {
    // Interpolate through values at Chebyshev points of [lo, hi]; Newton
    // divided differences, then expand around c_new.  Stable because only
    // well-scaled function values enter.
    const int n = static_cast<int>(coef.size());
    PiecePoly out;
    out.lo = lo;
    out.hi = hi;
    out.c0 = c_new;
    out.coef.assign(n, 0.0);
    if (n == 0) return out;
    std::vector<double> x(n), fval(n);
    const double mid = 0.5 * (lo + hi), half = std::max(0.5 * (hi - lo), 1e-30);
    for (int i = 0; i < n; ++i) {
        x[i] = n == 1 ? mid : mid + half * std::cos(M_PI * i / (n - 1));
        fval[i] = eval(x[i]);
    }
    // Newton divided differences.
    std::vector<double> dd = fval;
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - j]);
    // Horner expansion around c_new: p(z) = dd[n-1]; p = p*(z-x[k]) + dd[k].
    std::vector<double> acc(n, 0.0);
    acc[0] = dd[n - 1];
    int deg = 0;
    for (int k = n - 2; k >= 0; --k) {
        // acc *= (z - x[k]) with z - x[k] = (z - c_new) + (c_new - x[k])
        const double shift = c_new - x[k];
        for (int p = deg + 1; p >= 1; --p) acc[p] = acc[p - 1] + acc[p] * shift;
        acc[0] = acc[0] * shift + dd[k];
        ++deg;
    }
    out.coef = acc;
    return out;
}

PiecePoly PiecePoly::restricted(double a, double b) const {
    PiecePoly out = *this;
    out.lo = std::max(lo, a);
    out.hi = std::min(hi, b);
    return out;
}

namespace {

// int P(z) e^{i beta z} dz over [P.lo, P.hi], exact (recursion in the
// monomial degree, series for small beta).
cd linear_phase_poly_integral(const PiecePoly& P, double beta) {
    const double A = P.lo - P.c0, B = P.hi - P.c0;
    const int n = static_cast<int>(P.coef.size());
    std::vector<cd> Lp(n, 0.0);  // int u^p e^{i beta u} du over [A,B]
    const double width = B - A;
    const double umax = std::max(std::abs(A), std::abs(B));
    if (std::abs(beta) * umax < 0.5) {
        for (int p = 0; p < n; ++p) {
            cd s = 0.0, cj = 1.0;
            for (int j = 0; j < 64; ++j) {
                const int q = p + j + 1;
                s += cj * (ipow(B, q) - ipow(A, q)) / static_cast<double>(q);
                const double bound = std::abs(cj) * 2.0 * ipow(umax, q) / q;
                if (bound < 1e-18 * (1 + std::abs(s)) && j > 2) break;
                cj *= I * beta / static_cast<double>(j + 1);
            }
            Lp[p] = s;
        }
    } else {
        const cd eb = std::polar(1.0, beta * B), ea = std::polar(1.0, beta * A);
        const cd ib = I * beta;
        Lp[0] = (eb - ea) / ib;
        for (int p = 1; p < n; ++p)
            Lp[p] = (ipow(B, p) * eb - ipow(A, p) * ea) / ib -
                    (static_cast<double>(p) / ib) * Lp[p - 1];
    }
    cd total = 0.0;
    for (int p = 0; p < n; ++p) total += P.coef[p] * Lp[p];
    (void)width;
    return total * std::polar(1.0, beta * P.c0);
}

// Stationary branch: int P(z) e^{-i gamma (z+a)^2} dz with the phase center
// -a within a few widths of [lo,hi].  Recenter P at -a, substitute
// t = sqrt(gamma) (z+a), and contract against Fresnel moments.
cd stationary_branch(const PiecePoly& P, double gamma, double a) {
    const PiecePoly Q = P.recentered(-a);
    const double sg = std::sqrt(gamma);
    const double t0 = sg * (P.lo + a), t1 = sg * (P.hi + a);
    const int n = static_cast<int>(Q.coef.size());
    const auto J = fresnel_moments(t0, t1, n - 1);
    cd total = 0.0;
    double scale = 1.0 / sg;  // dz = dt / sg ; (z+a)^p = t^p / sg^p
    for (int p = 0; p < n; ++p) {
        total += Q.coef[p] * scale * J[p];
        scale /= sg;
    }
    return total;
}

// Far branch: no stationary point near the interval.  Asymptotic repeated
// integration by parts with amplitude terms c (z-c0)^p (z+a)^{-q}; falls
// back to Gauss panels if the series stalls.
struct RationalAmp {
    // coef[p][q]
    std::vector<std::vector<cd>> coef;
    int maxp() const { return static_cast<int>(coef.size()) - 1; }
    int maxq() const { return coef.empty() ? -1 : static_cast<int>(coef[0].size()) - 1; }
};

cd eval_amp(const RationalAmp& A, double u, double za) {
    // u = z - c0, za = z + a
    cd s = 0.0;
    for (int p = 0; p <= A.maxp(); ++p) {
        for (int q = 0; q <= A.maxq(); ++q) {
            const cd c = A.coef[p][q];
            if (c == cd{}) continue;
            s += c * ipow(u, p) / ipow(za, q);
        }
    }
    return s;
}

cd panels_fallback(const PiecePoly& P, double gamma, double a,
                   int gauss_order = 10) {
    QuadratureSpec spec;
    spec.gauss_order = gauss_order;
    spec.max_panels = 2000000;
    auto f = [&](double z) {
        return P.eval(z) * std::polar(1.0, -gamma * (z + a) * (z + a));
    };
    auto freq = [&](double z) { return std::abs(2.0 * gamma * (z + a)); };
    return integrate_oscillatory(f, P.lo, P.hi, freq, {}, spec);
}

cd far_branch(const PiecePoly& P, double gamma, double a) {
    const double dist = std::min(std::abs(P.lo + a), std::abs(P.hi + a));
    const int np = static_cast<int>(P.coef.size());
    const int max_iter = 40;
    RationalAmp A;
    A.coef.assign(np + 1, std::vector<cd>(max_iter + 2, cd{}));
    for (int p = 0; p < np; ++p) A.coef[p][0] = P.coef[p];

    const double ulo = P.lo - P.c0, uhi = P.hi - P.c0;
    const double zalo = P.lo + a, zahi = P.hi + a;
    const cd eglo = std::polar(1.0, -gamma * zalo * zalo);
    const cd eghi = std::polar(1.0, -gamma * zahi * zahi);

    cd total = 0.0;
    double prev_mag = 1e300;
    for (int iter = 0; iter < max_iter; ++iter) {
        // B = A / (i g') with g' = -2 gamma (z+a):  (p,q) -> (p,q+1) * 1/(-2 i gamma)
        RationalAmp B;
        B.coef.assign(A.coef.size(), std::vector<cd>(A.coef[0].size(), cd{}));
        const cd fac = 1.0 / (-2.0 * I * gamma);
        for (int p = 0; p <= A.maxp(); ++p)
            for (int q = 0; q + 1 <= A.maxq(); ++q) B.coef[p][q + 1] = A.coef[p][q] * fac;
        // Boundary term [B e^{ig}]_{lo}^{hi}
        const cd bterm = eval_amp(B, uhi, zahi) * eghi - eval_amp(B, ulo, zalo) * eglo;
        total += bterm;
        // New amplitude A = -B'
        RationalAmp An;
        An.coef.assign(B.coef.size(), std::vector<cd>(B.coef[0].size(), cd{}));
        for (int p = 0; p <= B.maxp(); ++p) {
            for (int q = 0; q <= B.maxq(); ++q) {
                const cd c = B.coef[p][q];
                if (c == cd{}) continue;
                if (p >= 1) An.coef[p - 1][q] -= c * static_cast<double>(p);
                if (q + 1 <= B.maxq()) An.coef[p][q + 1] += c * static_cast<double>(q);
            }
        }
        A = std::move(An);
        // Remaining-integral crude bound: max|A| over endpoints * length.
        const double mag =
            std::max(std::abs(eval_amp(A, ulo, zalo)), std::abs(eval_amp(A, uhi, zahi))) *
            (P.hi - P.lo);
        if (mag < 1e-16 * (1.0 + std::abs(total))) return total;
        if (mag > prev_mag) {
            // Asymptotic series stalled; in that regime the frequency is low
            // enough for panels.
            return panels_fallback(P, gamma, a);
        }
        prev_mag = mag;
    }
    (void)dist;
    return panels_fallback(P, gamma, a);
}

cd piece_quadratic(const PiecePoly& P, double gamma, double a) {
    // gamma > 0 assumed here.
    const double sg = std::sqrt(gamma);
    const double width = P.hi - P.lo;
    const double dlo = P.lo + a, dhi = P.hi + a;  // z+a at the ends
    const double near_radius = 6.0 / sg;

    // Distance from the phase center -a to the interval.
    double dist = 0.0;
    if (dlo > 0)
        dist = dlo;
    else if (dhi < 0)
        dist = -dhi;

    if (dist > std::max(2.0 * width, near_radius)) return far_branch(P, gamma, a);

    // Overlaps the near zone: split into the near part (stationary branch)
    // and far tails (recurse).
    const double cut_lo = -a - std::max(near_radius, 2.0 * width);
    const double cut_hi = -a + std::max(near_radius, 2.0 * width);
    cd total = 0.0;
    if (P.lo < cut_lo) {
        total += far_branch(P.restricted(P.lo, cut_lo), gamma, a);
    }
    if (P.hi > cut_hi) {
        total += far_branch(P.restricted(cut_hi, P.hi), gamma, a);
    }
    const double mlo = std::max(P.lo, cut_lo), mhi = std::min(P.hi, cut_hi);
    if (mhi > mlo) total += stationary_branch(P.restricted(mlo, mhi), gamma, a);
    return total;
}

} // namespace

cd osc_quadratic_piece(const PiecePoly& P, double beta, double gamma, double a) {
    if (P.hi <= P.lo || P.coef.empty()) return 0.0;
    const double maxza =
        std::max(std::abs(P.lo + a), std::abs(P.hi + a));

    if (std::abs(gamma) * maxza * maxza < 1e-6) {
        // Quadratic phase negligible-to-small: expand it as a short series
        // and reduce to linear-phase polynomial integrals.
        // e^{-i g (z+a)^2} = sum_j (-i g)^j (z+a)^{2j} / j!
        cd total = 0.0;
        PiecePoly cur = P;  // P * (z+a)^{2j}, maintained around c0
        cd cj = 1.0;
        for (int j = 0; j < 6; ++j) {
            const cd contrib = cj * linear_phase_poly_integral(cur, beta);
            total += contrib;
            if (std::abs(cj) * ipow(maxza, 2 * (j + 1)) * std::abs(gamma) /
                    (j + 1.0) <
                1e-18)
                break;
            // cur *= (z+a)^2 = ((z-c0) + (c0+a))^2
            const double s = P.c0 + a;
            PiecePoly nxt = cur;
            nxt.coef.assign(cur.coef.size() + 2, 0.0);
            for (std::size_t p = 0; p < cur.coef.size(); ++p) {
                nxt.coef[p] += cur.coef[p] * s * s;
                nxt.coef[p + 1] += cur.coef[p] * 2.0 * s;
                nxt.coef[p + 2] += cur.coef[p];
            }
            cur = nxt;
            cj *= -I * gamma / static_cast<double>(j + 1);
        }
        return total;
    }

    if (gamma < 0) {
        // Conjugate symmetry (P real): conj of the integral with (-beta, -gamma).
        PiecePoly Pc = P;
        return std::conj(osc_quadratic_piece(Pc, -beta, -gamma, a));
    }

    // Fold the linear phase into the shift: beta z - gamma (z+a)^2
    //   = -gamma (z + a')^2 + (beta^2/(4 gamma) - beta a),  a' = a - beta/(2 gamma).
    const double ashift = a - beta / (2.0 * gamma);
    const cd phase = std::polar(1.0, beta * beta / (4.0 * gamma) - beta * a);
    return phase * piece_quadratic(P, gamma, ashift);
}

cd osc_quadratic_integral(const std::vector<PiecePoly>& pieces, double beta,
                          double gamma, double a) {
    cd total = 0.0;
    for (const auto& P : pieces) total += osc_quadratic_piece(P, beta, gamma, a);
    return total;
}

} // namespace extlab
