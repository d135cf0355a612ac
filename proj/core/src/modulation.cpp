#include "extlab/modulation.hpp"

#include <cmath>
#include <cstdio>

#include "extlab/errors.hpp"
#include "extlab/parallel.hpp"

namespace extlab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// R(t) = int_0^t u^r (1-u)^r du; transition profile T(t) = 1 - R(t)/R(1).
double smoothstep_down(double t, int r) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    auto R = [&](double u) {
        double s = 0.0;
        for (int j = 0; j <= r; ++j)
            s += binom(r, j) * (j % 2 ? -1.0 : 1.0) * ipow(u, r + j + 1) / (r + j + 1);
        return s;
    };
    return 1.0 - R(t) / R(1.0);
}

} // namespace

double CutoffPsi::eval1(int axis, double x) const {
    const double u = std::abs(x - support.center[axis]);
    const double p = 0.5 * plateau.side;
    const double S = 0.5 * support.side;
    if (u <= p) return 1.0;
    if (u >= S) return 0.0;
    return smoothstep_down((u - p) / (S - p), r);
}

double CutoffPsi::eval(const Point& x) const {
    double v = 1.0;
    for (int i = 0; i < dim && v != 0.0; ++i) v *= eval1(i, x[i]);
    return v;
}

CutoffPsi make_psi(const Cube& support, double plateau_fraction, int r) {
    CutoffPsi psi;
    psi.dim = support.dim;
    psi.support = support;
    psi.plateau = support.dilated(plateau_fraction);
    psi.r = r;
    return psi;
}

double ModConfig::phi_amp() const {
    const Lattice lat = lattice();
    if (dyadic_norm) return std::pow(2.0, -0.5 * s * dim);
    return std::pow(static_cast<double>(lat.size()), -0.5);
}

std::vector<Cube> lattice_cubes(const Lattice& lat, const Point& nu) {
    const double h = std::ldexp(1.0, -lat.s);
    std::vector<Cube> out;
    out.reserve(lat.size());
    for (std::int64_t i = 0; i < lat.size(); ++i) {
        const auto k = lat.index_to_k(i);
        Point c(lat.dim);
        for (int d = 0; d < lat.dim; ++d)
            c[d] = h * (static_cast<double>(k[d]) + 0.5) + nu[d];
        out.emplace_back(lat.dim, std::move(c), h);
    }
    return out;
}

Point channel_omega(const Lattice& lat, const std::vector<std::int64_t>& kprime) {
    Point w(lat.dim);
    const double denom = static_cast<double>(lat.points_per_axis());
    const double scale = 2.0 * M_PI * std::ldexp(1.0, lat.s) / denom;
    for (int i = 0; i < lat.dim; ++i) w[i] = scale * static_cast<double>(kprime[i]);
    return w;
}

cd mod_phi(const ModConfig& mc, const Point& omega, const Point& center) {
    double phase = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) phase += omega[i] * center[i];
    return std::polar(mc.phi_amp(), phase);
}

std::string ModCoeffs::to_csv() const {
    std::string out;
    for (int i = 0; i < lat.dim; ++i) out += "m" + std::to_string(i) + ",";
    out += "member,re,im\n";
    char buf[96];
    const double h = std::ldexp(1.0, -lat.s);
    for (std::int64_t f = 0; f < lat.size(); ++f) {
        const auto k = lat.index_to_k(f);
        for (int m = 0; m < members; ++m) {
            std::string row;
            for (int i = 0; i < lat.dim; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,", h * static_cast<double>(k[i]));
                row += buf;
            }
            const cd v = at(f, m);
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", m, v.real(), v.imag());
            out += row + buf;
        }
    }
    return out;
}

ModCoeffs decompose(const CoeffSeq& a, const ModConfig& mc) {
    const Lattice lat = mc.lattice();
    if (static_cast<std::int64_t>(a.cubes.size()) != lat.size())
        throw DimensionError("decompose: sequence is not lattice-indexed");
    ModCoeffs out;
    out.lat = lat;
    out.members = a.members;
    out.values.assign(static_cast<std::size_t>(lat.size()) * a.members, cd{});
    // The amplitude here must be the orthonormal one regardless of the g_m
    // normalization flag, so Parseval holds exactly.
    const double amp = std::pow(static_cast<double>(lat.size()), -0.5);
    auto rows = parallel_map<int>(static_cast<std::size_t>(lat.size()), [&](std::size_t mi) {
        const auto kp = lat.index_to_k(static_cast<std::int64_t>(mi));
        const Point omega = channel_omega(lat, kp);
        for (int mem = 0; mem < a.members; ++mem) {
            cd s = 0.0;
            for (std::size_t n = 0; n < a.cubes.size(); ++n) {
                double phase = 0.0;
                for (int i = 0; i < lat.dim; ++i)
                    phase += omega[i] * a.cubes[n].center[i];
                s += a.at(n, mem) * std::polar(amp, -phase);
            }
            out.values[mi * a.members + mem] = s;
        }
        return 0;
    });
    (void)rows;
    return out;
}

CoeffSeq reconstruct(const ModCoeffs& m, const ModConfig& mc, const Point& nu) {
    const Lattice lat = m.lat;
    CoeffSeq out;
    out.s = lat.s;
    out.members = m.members;
    out.cubes = lattice_cubes(lat, nu);
    out.values.assign(static_cast<std::size_t>(lat.size()) * m.members, cd{});
    const double amp = std::pow(static_cast<double>(lat.size()), -0.5);
    auto rows = parallel_map<int>(out.cubes.size(), [&](std::size_t n) {
        for (std::int64_t mi = 0; mi < lat.size(); ++mi) {
            const auto kp = lat.index_to_k(mi);
            const Point omega = channel_omega(lat, kp);
            double phase = 0.0;
            for (int i = 0; i < lat.dim; ++i) phase += omega[i] * out.cubes[n].center[i];
            const cd phi = std::polar(amp, phase);
            for (int mem = 0; mem < m.members; ++mem)
                out.values[n * m.members + mem] += m.at(mi, mem) * phi;
        }
        return 0;
    });
    (void)rows;
    return out;
}

CoeffSeq multiplier_M_psi(const CoeffSeq& b, const CutoffPsi& psi) {
    CoeffSeq out = b;
    for (std::size_t n = 0; n < b.cubes.size(); ++n) {
        const double w = psi.eval(b.cubes[n].center);
        for (int m = 0; m < b.members; ++m) out.at(n, m) = b.at(n, m) * w;
    }
    return out;
}

CoeffSeq lattice_coeffs(const TestFunction& f, const ModConfig& mc, const Point& v,
                        NeumannInfo* info) {
    const Lattice lat = mc.lattice();
    const Point nu = nu_of_grid(Grid(mc.dim, v), mc.s);
    FrameConfig fc;
    fc.grid = Grid(mc.dim, nu);
    fc.family = mc.family;
    fc.moll = mc.moll;
    fc.eta = mc.eta;
    fc.s_min = fc.s_max = mc.s;
    fc.neumann_tol = mc.neumann_tol;
    fc.neumann_max_terms = mc.neumann_max_terms;
    fc.quad = mc.quad;
    fc.region = Cube(mc.dim, Point(mc.dim, 0.0), 2.0);
    FrameState st(fc, lattice_cubes(lat, nu));
    return pseudoprojection_Q(f, st, info);
}

std::vector<cd> channel_A(const TestFunction& f, const ModConfig& mc, const Point& v,
                          const std::vector<std::int64_t>& kprime) {
    const CoeffSeq a = lattice_coeffs(f, mc, v);
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    std::vector<cd> out(a.members, cd{});
    for (std::size_t n = 0; n < a.cubes.size(); ++n) {
        const cd phi = mod_phi(mc, omega, a.cubes[n].center);
        for (int mem = 0; mem < a.members; ++mem)
            out[mem] += a.at(n, mem) * std::conj(phi);
    }
    return out;
}

TestFunction build_g_m(const ModConfig& mc, const std::vector<std::int64_t>& kprime,
                       int member, const Point& nu) {
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    const auto cubes = lattice_cubes(lat, nu);
    std::vector<TestFunction::ExpTerm> terms;
    terms.reserve(cubes.size());
    for (const auto& Q : cubes) {
        const double w = mc.psi.eval(Q.center);
        if (w == 0.0) continue;
        terms.push_back({Q, member, w * mod_phi(mc, omega, Q.center)});
    }
    return TestFunction::expansion(*mc.family, *mc.moll, mc.eta, std::move(terms));
}

PeriodicInterpolant::PeriodicInterpolant(
    int dim, double period, int n_per_axis,
    const std::function<std::vector<cd>(const Point&)>& F, int channels)
    : dim_(dim), n_(n_per_axis), channels_(channels), period_(period) {
    if (dim < 1 || dim > 2) throw DimensionError("PeriodicInterpolant: dim 1 or 2");
    if (n_ % 2 == 0) ++n_;  // odd counts keep the frequency set symmetric

    const std::int64_t npts = dim_ == 1 ? n_ : static_cast<std::int64_t>(n_) * n_;
    // Sample.
    auto samples = parallel_map<std::vector<cd>>(
        static_cast<std::size_t>(npts), [&](std::size_t flat) {
            Point y(dim_);
            std::int64_t rem = static_cast<std::int64_t>(flat);
            for (int ax = 0; ax < dim_; ++ax) {
                y[ax] = period_ * static_cast<double>(rem % n_) / n_;
                rem /= n_;
            }
            return F(y);
        });

    // Direct DFT per axis (n is tiny at desk scale).
    const int half = (n_ - 1) / 2;
    coef_.assign(static_cast<std::size_t>(npts) * channels_, cd{});
    if (dim_ == 1) {
        for (int j = -half; j <= half; ++j) {
            for (int ch = 0; ch < channels_; ++ch) {
                cd s = 0.0;
                for (int k = 0; k < n_; ++k)
                    s += samples[k][ch] *
                         std::polar(1.0, -2.0 * M_PI * j * k / static_cast<double>(n_));
                coef_[static_cast<std::size_t>(ch) * npts + (j + half)] =
                    s / static_cast<double>(n_);
            }
        }
    } else {
        for (int j1 = -half; j1 <= half; ++j1) {
            for (int j2 = -half; j2 <= half; ++j2) {
                for (int ch = 0; ch < channels_; ++ch) {
                    cd s = 0.0;
                    for (int k2 = 0; k2 < n_; ++k2)
                        for (int k1 = 0; k1 < n_; ++k1)
                            s += samples[k2 * n_ + k1][ch] *
                                 std::polar(1.0, -2.0 * M_PI *
                                                     (j1 * k1 + j2 * k2) /
                                                     static_cast<double>(n_));
                    coef_[static_cast<std::size_t>(ch) * npts +
                          ((j2 + half) * n_ + (j1 + half))] =
                        s / static_cast<double>(n_ * n_);
                }
            }
        }
    }
}

std::vector<cd> PeriodicInterpolant::eval(const Point& y) const {
    std::vector<cd> out(channels_);
    for (int ch = 0; ch < channels_; ++ch) out[ch] = eval1(ch, y);
    return out;
}

cd PeriodicInterpolant::eval1(int channel, const Point& y) const {
    const int half = (n_ - 1) / 2;
    const std::int64_t npts = dim_ == 1 ? n_ : static_cast<std::int64_t>(n_) * n_;
    const cd* c = &coef_[static_cast<std::size_t>(channel) * npts];
    if (dim_ == 1) {
        cd s = 0.0;
        for (int j = -half; j <= half; ++j)
            s += c[j + half] * std::polar(1.0, 2.0 * M_PI * j * y[0] / period_);
        return s;
    }
    cd s = 0.0;
    for (int j2 = -half; j2 <= half; ++j2) {
        cd row = 0.0;
        for (int j1 = -half; j1 <= half; ++j1)
            row += c[(j2 + half) * n_ + (j1 + half)] *
                   std::polar(1.0, 2.0 * M_PI * j1 * y[0] / period_);
        s += row * std::polar(1.0, 2.0 * M_PI * j2 * y[1] / period_);
    }
    return s;
}

cd PeriodicInterpolant::fourier(int channel, const std::vector<int>& j) const {
    const int half = (n_ - 1) / 2;
    const std::int64_t npts = dim_ == 1 ? n_ : static_cast<std::int64_t>(n_) * n_;
    for (int ax = 0; ax < dim_; ++ax)
        if (j[ax] < -half || j[ax] > half) return 0.0;
    const cd* c = &coef_[static_cast<std::size_t>(channel) * npts];
    if (dim_ == 1) return c[j[0] + half];
    return c[(j[1] + half) * n_ + (j[0] + half)];
}

} // namespace extlab
