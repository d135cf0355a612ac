#include "extlab/extension.hpp"

#include <algorithm>
#include <cmath>

#include "extlab/errors.hpp"
#include "extlab/parallel.hpp"

namespace extlab {

double Freq::norm() const {
    double s = xi_d * xi_d;
    for (double v : xi_prime) s += v * v;
    return std::sqrt(s);
}

Point Freq::beta(const Point& omega, const Point& x) const {
    Point b(xi_prime.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = omega[i] - xi_prime[i] - 2.0 * xi_d * x[i];
    return b;
}

Point Freq::alpha(const Point& omega, const Point& x) const {
    Point b = beta(omega, x);
    for (auto& v : b) v /= 2.0 * xi_d;
    return b;
}

namespace {

cd paraboloid_phase(const Freq& xi, const Point& x) {
    double p = 0.0;
    double x2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p += xi.xi_prime[i] * x[i];
        x2 += x[i] * x[i];
    }
    return std::polar(1.0, -(p + xi.xi_d * x2));
}

std::vector<double> wavelet_breakpoints_of(const TestFunction& f, int axis) {
    std::vector<double> bps;
    if (!f.is_expansion) return bps;
    for (const auto& t : f.terms) {
        SmoothWavelet w = smooth_wavelet(*f.family, t.member, t.cube, f.eta, *f.moll);
        auto v = w.axis_breakpoints(axis);
        bps.insert(bps.end(), v.begin(), v.end());
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              bps.end());
    return bps;
}

} // namespace

cd extend(const TestFunction& f, const Freq& xi, const QuadratureSpec& quad) {
    const int dim = f.support.dim;
    if (dim == 1) {
        auto g = [&](double x) { return f.eval({x}) * paraboloid_phase(xi, {x}); };
        auto freq = [&](double x) {
            return std::abs(xi.xi_prime[0] + 2.0 * xi.xi_d * x) + 1e-6;
        };
        return integrate_oscillatory(g, f.support.lo(0), f.support.hi(0), freq,
                                     wavelet_breakpoints_of(f, 0), quad);
    }
    auto g = [&](const Point& x) { return f.eval(x) * paraboloid_phase(xi, x); };
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax) bps[ax] = wavelet_breakpoints_of(f, ax);
    auto axis_freq = [&](int ax) {
        return std::abs(xi.xi_prime[ax]) +
               2.0 * std::abs(xi.xi_d) *
                   (std::abs(f.support.center[ax]) + 0.5 * f.support.side) +
               1e-6;
    };
    return integrate_oscillatory_box(g, f.support, axis_freq, bps, quad);
}

cd mother_osc_integral(const ModConfig& mc, int member, const Point& q, double lambda,
                       const QuadratureSpec& quad) {
    const int dim = mc.dim;
    const double side = std::ldexp(1.0, -mc.s);
    const Cube Qs(dim, Point(dim, 0.0), side);
    SmoothWavelet w = smooth_wavelet(*mc.family, member, Qs, mc.eta, *mc.moll);
    if (dim == 1) {
        auto g = [&](double x) {
            return w.eval({x}) * std::polar(1.0, -(q[0] * x + lambda * x * x));
        };
        auto freq = [&](double x) { return std::abs(q[0] + 2.0 * lambda * x) + 1e-6; };
        return integrate_oscillatory(g, w.support().lo(0), w.support().hi(0), freq,
                                     w.axis_breakpoints(0), quad);
    }
    auto g = [&](const Point& x) {
        double p = 0.0, x2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            p += q[i] * x[i];
            x2 += x[i] * x[i];
        }
        return w.eval(x) * std::polar(1.0, -(p + lambda * x2));
    };
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax) bps[ax] = w.axis_breakpoints(ax);
    auto axis_freq = [&](int ax) {
        return std::abs(q[ax]) + 2.0 * std::abs(lambda) * side + 1e-6;
    };
    return integrate_oscillatory_box(g, w.support(), axis_freq, bps, quad);
}

cd extend_wavelet_factored(const ModConfig& mc, const Cube& J, int member,
                           const Freq& xi, const QuadratureSpec& quad) {
    const int dim = mc.dim;
    double p = 0.0, c2 = 0.0;
    Point q(dim);
    for (int i = 0; i < dim; ++i) {
        p += xi.xi_prime[i] * J.center[i];
        c2 += J.center[i] * J.center[i];
        q[i] = xi.xi_prime[i] + 2.0 * xi.xi_d * J.center[i];
    }
    const cd phase = std::polar(1.0, -(p + xi.xi_d * c2));
    return phase * mother_osc_integral(mc, member, q, xi.xi_d, quad);
}

OmegaSum exp_sum_omega(const ModConfig& mc, const std::vector<std::int64_t>& kprime,
                       const Freq& xi, const Point& x, const Point& nu) {
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    const auto cubes = lattice_cubes(lat, nu);
    const double lambda = xi.lambda();
    const Point b = xi.beta(omega, x);

    OmegaSum out;
    out.direct = 0.0;
    for (const auto& Q : cubes) {
        const double w = mc.psi.eval(Q.center);
        if (w == 0.0) continue;
        double phase = 0.0, c2 = 0.0;
        for (int i = 0; i < lat.dim; ++i) {
            phase += b[i] * Q.center[i];
            c2 += Q.center[i] * Q.center[i];
        }
        out.direct += w * std::polar(1.0, phase - lambda * c2);
    }

    if (lambda != 0.0) {
        double b2 = 0.0;
        for (double v : b) b2 += v * v;
        out.prefactor = std::polar(1.0, b2 / (4.0 * lambda));
        cd s = 0.0;
        for (const auto& Q : cubes) {
            const double w = mc.psi.eval(Q.center);
            if (w == 0.0) continue;
            double d2 = 0.0;
            for (int i = 0; i < lat.dim; ++i) {
                const double d = Q.center[i] - b[i] / (2.0 * lambda);
                d2 += d * d;
            }
            s += w * std::polar(1.0, -lambda * d2);
        }
        out.completed = out.prefactor * s;
        if (std::abs(out.completed - out.direct) >
            1e-10 * (1.0 + std::abs(out.direct)))
            throw Error("exp_sum_omega: completed-square identity violated");
    } else {
        out.prefactor = 1.0;
        out.completed = out.direct;
    }
    return out;
}

ShiftSamples::ShiftSamples(const TestFunction& f, const ModConfig& mc, int n_per_axis)
    : mc_(mc), n_(n_per_axis) {
    if (n_ % 2 == 0) ++n_;
    const double h = std::ldexp(1.0, -mc_.s);
    std::int64_t total = 1;
    for (int i = 0; i < mc_.dim; ++i) total *= n_;
    samples_.resize(total);
    // Frame solves dominate; parallelize over sample shifts.
    auto rows = parallel_map<int>(static_cast<std::size_t>(total), [&](std::size_t j) {
        Point v(mc_.dim);
        std::int64_t rem = static_cast<std::int64_t>(j);
        for (int i = 0; i < mc_.dim; ++i) {
            v[i] = h * static_cast<double>(rem % n_) / n_;
            rem /= n_;
        }
        samples_[j] = lattice_coeffs(f, mc_, v);
        return 0;
    });
    (void)rows;
}

Point ShiftSamples::shift_at(std::int64_t flat) const {
    const double h = std::ldexp(1.0, -mc_.s);
    Point v(mc_.dim);
    for (int i = 0; i < mc_.dim; ++i) {
        v[i] = h * static_cast<double>(flat % n_) / n_;
        flat /= n_;
    }
    return v;
}

std::vector<cd> ShiftSamples::A_at(std::int64_t flat,
                                   const std::vector<std::int64_t>& kprime) const {
    const CoeffSeq& a = samples_[flat];
    const Point omega = channel_omega(mc_.lattice(), kprime);
    std::vector<cd> out(a.members, cd{});
    for (std::size_t n = 0; n < a.cubes.size(); ++n) {
        const cd phi = mod_phi(mc_, omega, a.cubes[n].center);
        for (int mem = 0; mem < a.members; ++mem)
            out[mem] += a.at(n, mem) * std::conj(phi);
    }
    return out;
}

PeriodicInterpolant ShiftSamples::interpolant(
    const std::vector<std::int64_t>& kprime) const {
    const double h = std::ldexp(1.0, -mc_.s);
    const int members = samples_.empty() ? 1 : samples_[0].members;
    // The sample grid of this object is exactly the interpolant's grid.
    std::vector<std::vector<cd>> vals(samples_.size());
    for (std::int64_t j = 0; j < n_samples(); ++j) vals[j] = A_at(j, kprime);
    auto F = [&](const Point& y) -> std::vector<cd> {
        // Locate the sample index for this grid point.
        std::int64_t flat = 0, stride = 1;
        for (int i = 0; i < mc_.dim; ++i) {
            const double t = y[i] / h * n_;
            const std::int64_t k = std::llround(t) % n_;
            flat += stride * k;
            stride *= n_;
        }
        return vals[flat];
    };
    return PeriodicInterpolant(mc_.dim, h, n_, F, members);
}

std::vector<cd> averaged_gamma_direct(const ShiftSamples& shifts,
                                      const std::vector<std::int64_t>& kprime,
                                      const Freq& xi, const Point& x) {
    const ModConfig& mc = shifts.config();
    const int members = mc.family->size();
    std::vector<cd> acc(members, cd{});
    for (std::int64_t j = 0; j < shifts.n_samples(); ++j) {
        const Point v = shifts.shift_at(j);
        const Point nu = nu_of_grid(Grid(mc.dim, v), mc.s);
        const auto A = shifts.A_at(j, kprime);
        const auto omega = exp_sum_omega(mc, kprime, xi, x, nu);
        for (int mem = 0; mem < members; ++mem) acc[mem] += A[mem] * omega.direct;
    }
    for (auto& v : acc) v /= static_cast<double>(shifts.n_samples());
    return acc;
}

std::vector<cd> averaged_gamma_oscillatory(const PeriodicInterpolant& A_interp,
                                           const ModConfig& mc,
                                           const std::vector<std::int64_t>& kprime,
                                           const Freq& xi, const Point& x,
                                           const QuadratureSpec& quad) {
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    const Point bt = xi.beta(omega, x);
    const double lambda = xi.lambda();
    const double h = std::ldexp(1.0, -mc.s);
    const double half = 0.5 * h;
    const double scale = std::pow(2.0, mc.s * mc.dim);
    const int members = A_interp.channels();

    // Content of A~ lives on the first few harmonics of 2 pi 2^s.
    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;

    std::vector<cd> out(members, cd{});
    if (mc.dim == 1) {
        const double lo = mc.psi.support.lo(0), hi = mc.psi.support.hi(0);
        std::vector<double> bps = {mc.psi.plateau.lo(0), mc.psi.plateau.hi(0)};
        auto freq = [&](double y) {
            return std::abs(bt[0]) + 2.0 * std::abs(lambda) * std::abs(y) + amp_freq;
        };
        for (int mem = 0; mem < members; ++mem) {
            auto g = [&](double y) -> cd {
                const double w = mc.psi.eval({y});
                if (w == 0.0) return 0.0;
                Point yr = {y - half};
                yr[0] -= h * std::floor(yr[0] / h);
                return A_interp.eval1(mem, yr) * w *
                       std::polar(1.0, bt[0] * y - lambda * y * y);
            };
            out[mem] = scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
        }
        return out;
    }

    // dim == 2 (d = 3 smoke tests)
    std::vector<std::vector<double>> bps(2);
    for (int ax = 0; ax < 2; ++ax)
        bps[ax] = {mc.psi.plateau.lo(ax), mc.psi.plateau.hi(ax)};
    auto axis_freq = [&](int ax) {
        return std::abs(bt[ax]) +
               2.0 * std::abs(lambda) *
                   (std::abs(mc.psi.support.center[ax]) + 0.5 * mc.psi.support.side) +
               amp_freq;
    };
    for (int mem = 0; mem < members; ++mem) {
        auto g = [&](const Point& y) -> cd {
            const double w = mc.psi.eval(y);
            if (w == 0.0) return 0.0;
            Point yr(2);
            double phase = 0.0, y2 = 0.0;
            for (int i = 0; i < 2; ++i) {
                yr[i] = y[i] - half;
                yr[i] -= h * std::floor(yr[i] / h);
                phase += bt[i] * y[i];
                y2 += y[i] * y[i];
            }
            return A_interp.eval1(mem, yr) * w * std::polar(1.0, phase - lambda * y2);
        };
        out[mem] =
            scale * integrate_oscillatory_box(g, mc.psi.support, axis_freq, bps, quad);
    }
    return out;
}

namespace {

cd extension_route_gamma_x(const ShiftSamples& shifts,
                           const std::vector<std::int64_t>& kprime, const Freq& xi,
                           const QuadratureSpec& quad) {
    const ModConfig& mc = shifts.config();
    const int dim = mc.dim;
    const double side = std::ldexp(1.0, -mc.s);
    const Cube Qs(dim, Point(dim, 0.0), side);
    const auto interp = shifts.interpolant(kprime);
    const int members = interp.channels();
    const double amp = mc.phi_amp();
    cd total = 0.0;
    for (int mem = 0; mem < members; ++mem) {
        SmoothWavelet w = smooth_wavelet(*mc.family, mem, Qs, mc.eta, *mc.moll);
        if (dim == 1) {
            auto g = [&](double x) -> cd {
                const double hv = w.eval({x});
                if (hv == 0.0) return 0.0;
                const auto gamma =
                    averaged_gamma_oscillatory(interp, mc, kprime, xi, {x}, quad);
                return gamma[mem] * hv *
                       std::polar(1.0, -(xi.xi_prime[0] * x + xi.xi_d * x * x));
            };
            auto freq = [&](double x) {
                return std::abs(xi.xi_prime[0]) + 2.0 * std::abs(xi.xi_d) * std::abs(x) +
                       1e-6;
            };
            total += amp * integrate_oscillatory(g, w.support().lo(0),
                                                 w.support().hi(0), freq,
                                                 w.axis_breakpoints(0), quad);
        } else {
            auto g = [&](const Point& x) -> cd {
                const double hv = w.eval(x);
                if (hv == 0.0) return 0.0;
                const auto gamma =
                    averaged_gamma_oscillatory(interp, mc, kprime, xi, x, quad);
                return gamma[mem] * hv * paraboloid_phase(xi, x);
            };
            std::vector<std::vector<double>> bps(dim);
            for (int ax = 0; ax < dim; ++ax) bps[ax] = w.axis_breakpoints(ax);
            auto axis_freq = [&](int ax) {
                return std::abs(xi.xi_prime[ax]) + 2.0 * std::abs(xi.xi_d) * side + 1e-6;
            };
            total += amp * integrate_oscillatory_box(g, w.support(), axis_freq, bps,
                                                     quad);
        }
    }
    return total;
}

cd extension_route_which_gives(const ShiftSamples& shifts,
                               const std::vector<std::int64_t>& kprime, const Freq& xi,
                               const QuadratureSpec& quad) {
    const ModConfig& mc = shifts.config();
    const int dim = mc.dim;
    const double lambda = xi.lambda();
    if (lambda == 0.0)
        throw ConfigError("which_gives route needs xi_d != 0");
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    const auto interp = shifts.interpolant(kprime);
    const int members = interp.channels();
    const double h = std::ldexp(1.0, -mc.s);
    const double half = 0.5 * h;
    const double amp = mc.phi_amp();
    const double scale = std::pow(2.0, mc.s * mc.dim) * amp;

    // alpha0 = (omega - xi') / (2 lambda); prefactor e^{i |omega-xi'|^2/(4 lambda)}.
    Point alpha0(dim);
    double w2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = omega[i] - xi.xi_prime[i];
        alpha0[i] = d / (2.0 * lambda);
        w2 += d * d;
    }
    const cd pref = std::polar(1.0, w2 / (4.0 * lambda));

    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;
    cd total = 0.0;
    if (dim == 1) {
        const double lo = mc.psi.support.lo(0) - alpha0[0];
        const double hi = mc.psi.support.hi(0) - alpha0[0];
        std::vector<double> bps = {mc.psi.plateau.lo(0) - alpha0[0],
                                   mc.psi.plateau.hi(0) - alpha0[0]};
        auto freq = [&](double w) {
            return 2.0 * std::abs(lambda) * (std::abs(w) + 2.0 * h) + amp_freq;
        };
        for (int mem = 0; mem < members; ++mem) {
            auto g = [&](double w) -> cd {
                const double y = w + alpha0[0];
                const double pv = mc.psi.eval({y});
                if (pv == 0.0) return 0.0;
                Point yr = {y - half};
                yr[0] -= h * std::floor(yr[0] / h);
                const cd H = mother_osc_integral(
                    mc, mem, {2.0 * lambda * w + omega[0]}, lambda, quad);
                return interp.eval1(mem, yr) * pv * H *
                       std::polar(1.0, -lambda * w * w);
            };
            total += scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
        }
        return pref * total;
    }
    // dim == 2
    Cube wbox(dim, Point(dim, 0.0), mc.psi.support.side);
    for (int i = 0; i < dim; ++i)
        wbox.center[i] = mc.psi.support.center[i] - alpha0[i];
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax)
        bps[ax] = {mc.psi.plateau.lo(ax) - alpha0[ax], mc.psi.plateau.hi(ax) - alpha0[ax]};
    auto axis_freq = [&](int ax) {
        return 2.0 * std::abs(lambda) *
                   (std::abs(wbox.center[ax]) + 0.5 * wbox.side + 2.0 * h) +
               amp_freq;
    };
    for (int mem = 0; mem < members; ++mem) {
        auto g = [&](const Point& w) -> cd {
            Point y(dim), yr(dim), q(dim);
            double wsq = 0.0;
            for (int i = 0; i < dim; ++i) {
                y[i] = w[i] + alpha0[i];
                yr[i] = y[i] - half;
                yr[i] -= h * std::floor(yr[i] / h);
                q[i] = 2.0 * lambda * w[i] + omega[i];
                wsq += w[i] * w[i];
            }
            const double pv = mc.psi.eval(y);
            if (pv == 0.0) return 0.0;
            const cd H = mother_osc_integral(mc, mem, q, lambda, quad);
            return interp.eval1(mem, yr) * pv * H * std::polar(1.0, -lambda * wsq);
        };
        total += scale * integrate_oscillatory_box(g, wbox, axis_freq, bps, quad);
    }
    return pref * total;
}

// Same integral as which_gives in the unshifted variable y = w + alpha0;
// the prefactor folds into the phase and the route stays valid at xi_d = 0:
//   amp 2^{s dim} sum_mem int (A~ psi)(y) e^{i (omega - xi').y - i lambda |y|^2}
//                              W_mem(xi' + 2 lambda y, lambda) dy.
cd extension_route_collapsed(const ShiftSamples& shifts,
                             const std::vector<std::int64_t>& kprime, const Freq& xi,
                             const QuadratureSpec& quad) {
    const ModConfig& mc = shifts.config();
    const int dim = mc.dim;
    const double lambda = xi.lambda();
    const Lattice lat = mc.lattice();
    const Point omega = channel_omega(lat, kprime);
    const auto interp = shifts.interpolant(kprime);
    const int members = interp.channels();
    const double h = std::ldexp(1.0, -mc.s);
    const double half = 0.5 * h;
    const double scale = std::pow(2.0, mc.s * mc.dim) * mc.phi_amp();
    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;

    if (dim != 1)
        throw ConfigError("collapsed route: desk-scale implementation is 1-D");
    const double lo = mc.psi.support.lo(0), hi = mc.psi.support.hi(0);
    std::vector<double> bps = {mc.psi.plateau.lo(0), mc.psi.plateau.hi(0)};
    const double carrier = omega[0] - xi.xi_prime[0];
    auto freq = [&](double y) {
        return std::abs(carrier) + 2.0 * std::abs(lambda) * std::abs(y) + amp_freq;
    };
    cd total = 0.0;
    for (int mem = 0; mem < members; ++mem) {
        const MotherOscTable W(mc, mem, lambda, xi.xi_prime[0] + 2.0 * lambda * lo,
                            xi.xi_prime[0] + 2.0 * lambda * hi, quad);
        auto g = [&](double y) -> cd {
            const double pv = mc.psi.eval({y});
            if (pv == 0.0) return 0.0;
            Point yr = {y - half};
            yr[0] -= h * std::floor(yr[0] / h);
            return interp.eval1(mem, yr) * pv *
                   W.eval(xi.xi_prime[0] + 2.0 * lambda * y) *
                   std::polar(1.0, carrier * y - lambda * y * y);
        };
        total += scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
    }
    return total;
}

cd extension_route_bruteforce(const ShiftSamples& shifts,
                              const std::vector<std::int64_t>& kprime, const Freq& xi,
                              const QuadratureSpec& quad) {
    const ModConfig& mc = shifts.config();
    cd acc = 0.0;
    for (std::int64_t j = 0; j < shifts.n_samples(); ++j) {
        const Point v = shifts.shift_at(j);
        const Point nu = nu_of_grid(Grid(mc.dim, v), mc.s);
        const auto A = shifts.A_at(j, kprime);
        for (int mem = 0; mem < static_cast<int>(A.size()); ++mem) {
            auto gm = build_g_m(mc, kprime, mem, nu);
            cd eg = 0.0;
            for (const auto& t : gm.terms)
                eg += t.coeff * extend_wavelet_factored(mc, t.cube, t.member, xi, quad);
            acc += A[mem] * eg;
        }
    }
    return acc / static_cast<double>(shifts.n_samples());
}

} // namespace

cd averaged_extension(const ShiftSamples& shifts,
                      const std::vector<std::int64_t>& kprime, const Freq& xi,
                      ExtensionRoute route, const QuadratureSpec& quad) {
    switch (route) {
        case ExtensionRoute::gamma_x:
            return extension_route_gamma_x(shifts, kprime, xi, quad);
        case ExtensionRoute::which_gives:
            return extension_route_which_gives(shifts, kprime, xi, quad);
        case ExtensionRoute::collapsed:
            return extension_route_collapsed(shifts, kprime, xi, quad);
        case ExtensionRoute::bruteforce:
            return extension_route_bruteforce(shifts, kprime, xi, quad);
    }
    throw ConfigError("averaged_extension: unknown route");
}

cd sum_over_m(const ShiftSamples& shifts, const Freq& xi, ExtensionRoute route,
              const QuadratureSpec& quad) {
    const Lattice lat = shifts.config().lattice();
    auto vals = parallel_map<cd>(static_cast<std::size_t>(lat.size()), [&](std::size_t mi) {
        return averaged_extension(shifts, lat.index_to_k(static_cast<std::int64_t>(mi)),
                                  xi, route, quad);
    });
    cd acc = 0.0;
    for (const auto& v : vals) acc += v;
    return acc;
}

cd averaged_extension_direct(const ShiftSamples& shifts, const Freq& xi,
                             const QuadratureSpec& quad) {
    const ModConfig& mc = shifts.config();
    auto vals = parallel_map<cd>(
        static_cast<std::size_t>(shifts.n_samples()), [&](std::size_t j) {
            const auto& a = shifts.coeffs_at(static_cast<std::int64_t>(j));
            const auto b = multiplier_M_psi(a, mc.psi);
            cd e = 0.0;
            for (std::size_t n = 0; n < b.cubes.size(); ++n) {
                for (int mem = 0; mem < b.members; ++mem) {
                    if (b.at(n, mem) == cd{}) continue;
                    e += b.at(n, mem) *
                         extend_wavelet_factored(mc, b.cubes[n], mem, xi, quad);
                }
            }
            return e;
        });
    cd acc = 0.0;
    for (const auto& v : vals) acc += v;
    return acc / static_cast<double>(shifts.n_samples());
}

CoeffField::CoeffField(const ShiftSamples& shifts) {
    const ModConfig& mc = shifts.config();
    if (mc.dim != 1) throw ConfigError("CoeffField: desk-scale implementation is 1-D");
    const Lattice lat = mc.lattice();
    const double h = std::ldexp(1.0, -mc.s);
    const int nv = shifts.n_per_axis();
    members_ = mc.family->size();
    step_ = h / nv;
    // y = h (k + 1/2) + h j / nv for k in [-N, N], j in [0, nv).
    y0_ = h * (static_cast<double>(-lat.N) + 0.5);
    count_ = lat.points_per_axis() * nv;
    values_.assign(static_cast<std::size_t>(count_) * members_, cd{});
    for (std::int64_t j = 0; j < nv; ++j) {
        const CoeffSeq& a = shifts.coeffs_at(j);
        for (std::int64_t k = 0; k < lat.points_per_axis(); ++k) {
            const std::int64_t idx = k * nv + j;
            for (int mem = 0; mem < members_; ++mem)
                values_[static_cast<std::size_t>(idx) * members_ + mem] = a.at(k, mem);
        }
    }
}

cd CoeffField::eval(int member, double y) const {
    const double t = (y - y0_) / step_;
    const std::int64_t i1 = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor(t)), 1, count_ - 3);
    // Cubic Lagrange on the 4 surrounding grid values.
    const double u = t - static_cast<double>(i1);
    auto v = [&](std::int64_t i) -> cd {
        if (i < 0 || i >= count_) return cd{};
        return values_[static_cast<std::size_t>(i) * members_ + member];
    };
    const cd f0 = v(i1 - 1), f1 = v(i1), f2 = v(i1 + 1), f3 = v(i1 + 2);
    const double um = u - 1.0, up = u + 1.0, u2 = u - 2.0;
    return f0 * (-u * um * u2 / 6.0) + f1 * (up * um * u2 / 2.0) +
           f2 * (-up * u * u2 / 2.0) + f3 * (up * u * um / 6.0);
}

cd averaged_field_extension(const CoeffField& field, const ModConfig& mc,
                            const Freq& xi, const QuadratureSpec& quad) {
    const double lambda = xi.lambda();
    const double scale = std::pow(2.0, mc.s * mc.dim);
    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;
    const double lo = mc.psi.support.lo(0), hi = mc.psi.support.hi(0);
    std::vector<double> bps = {mc.psi.plateau.lo(0), mc.psi.plateau.hi(0)};
    auto freq = [&](double y) {
        return std::abs(xi.xi_prime[0]) + 2.0 * std::abs(lambda) * std::abs(y) +
               amp_freq;
    };
    cd total = 0.0;
    for (int mem = 0; mem < field.members(); ++mem) {
        const MotherOscTable W(mc, mem, lambda, xi.xi_prime[0] + 2.0 * lambda * lo,
                            xi.xi_prime[0] + 2.0 * lambda * hi, quad);
        auto g = [&](double y) -> cd {
            const double pv = mc.psi.eval({y});
            if (pv == 0.0) return 0.0;
            return field.eval(mem, y) * pv *
                   W.eval(xi.xi_prime[0] + 2.0 * lambda * y) *
                   std::polar(1.0, -(xi.xi_prime[0] * y + lambda * y * y));
        };
        total += scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
    }
    return total;
}


MotherOscTable::MotherOscTable(const ModConfig& mc, int member, double lambda,
                               double qmin, double qmax, const QuadratureSpec& quad,
                               int min_nodes)
    : n_(min_nodes) {
    mid_ = 0.5 * (qmin + qmax);
    half_ = std::max(0.5 * std::abs(qmax - qmin), 1e-12);
    // Nodes scale with the number of W-oscillations across the q-range.
    const double b = std::ldexp(1.0, -mc.s) * (0.5 + mc.eta);
    n_ = std::max(min_nodes, static_cast<int>(std::ceil(2.0 * half_ * b)) * 4 + 12);
    nodes_.resize(n_);
    vals_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        nodes_[j] = std::cos(M_PI * j / (n_ - 1));
        vals_[j] =
            mother_osc_integral(mc, member, {mid_ + half_ * nodes_[j]}, lambda, quad);
    }
}

cd MotherOscTable::eval(double q) const {
    const double t = (q - mid_) / half_;
    cd num = 0.0;
    double den = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double d = t - nodes_[j];
        if (std::abs(d) < 1e-14) return vals_[j];
        double w = (j % 2 ? -1.0 : 1.0);
        if (j == 0 || j == n_ - 1) w *= 0.5;
        num += vals_[j] * (w / d);
        den += w / d;
    }
    return num / den;
}

cd channel_collapsed_with_tables(const PeriodicInterpolant& A_interp,
                                 const ModConfig& mc,
                                 const std::vector<std::int64_t>& kprime,
                                 const Freq& xi,
                                 const std::vector<const MotherOscTable*>& W,
                                 const QuadratureSpec& quad) {
    const double lambda = xi.lambda();
    const Point omega = channel_omega(mc.lattice(), kprime);
    const double h = std::ldexp(1.0, -mc.s);
    const double half = 0.5 * h;
    const double scale = std::pow(2.0, mc.s * mc.dim) * mc.phi_amp();
    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;
    const double lo = mc.psi.support.lo(0), hi = mc.psi.support.hi(0);
    std::vector<double> bps = {mc.psi.plateau.lo(0), mc.psi.plateau.hi(0)};
    const double carrier = omega[0] - xi.xi_prime[0];
    auto freq = [&](double y) {
        return std::abs(carrier) + 2.0 * std::abs(lambda) * std::abs(y) + amp_freq;
    };
    cd total = 0.0;
    for (int mem = 0; mem < A_interp.channels(); ++mem) {
        auto g = [&](double y) -> cd {
            const double pv = mc.psi.eval({y});
            if (pv == 0.0) return 0.0;
            Point yr = {y - half};
            yr[0] -= h * std::floor(yr[0] / h);
            return A_interp.eval1(mem, yr) * pv *
                   W[mem]->eval(xi.xi_prime[0] + 2.0 * lambda * y) *
                   std::polar(1.0, carrier * y - lambda * y * y);
        };
        total += scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
    }
    return total;
}

cd field_collapsed_with_tables(const CoeffField& field, const ModConfig& mc,
                               const Freq& xi,
                               const std::vector<const MotherOscTable*>& W,
                               const QuadratureSpec& quad) {
    const double lambda = xi.lambda();
    const double scale = std::pow(2.0, mc.s * mc.dim);
    const double amp_freq = 2.0 * M_PI * std::ldexp(1.0, mc.s) * 8.0;
    const double lo = mc.psi.support.lo(0), hi = mc.psi.support.hi(0);
    std::vector<double> bps = {mc.psi.plateau.lo(0), mc.psi.plateau.hi(0)};
    auto freq = [&](double y) {
        return std::abs(xi.xi_prime[0]) + 2.0 * std::abs(lambda) * std::abs(y) +
               amp_freq;
    };
    cd total = 0.0;
    for (int mem = 0; mem < field.members(); ++mem) {
        auto g = [&](double y) -> cd {
            const double pv = mc.psi.eval({y});
            if (pv == 0.0) return 0.0;
            return field.eval(mem, y) * pv *
                   W[mem]->eval(xi.xi_prime[0] + 2.0 * lambda * y) *
                   std::polar(1.0, -(xi.xi_prime[0] * y + lambda * y * y));
        };
        total += scale * integrate_oscillatory(g, lo, hi, freq, bps, quad);
    }
    return total;
}

} // namespace extlab

