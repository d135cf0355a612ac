#include "extlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "extlab/errors.hpp"

namespace extlab {

void QuadratureSpec::validate() const {
    if (points_per_wavelength < 4.0)
        throw ConfigError("QuadratureSpec: points_per_wavelength must be >= 4");
    if (max_panels < 1) throw ConfigError("QuadratureSpec: max_panels must be >= 1");
    if (gauss_order < 2) throw ConfigError("QuadratureSpec: gauss_order must be >= 2");
}

namespace {

struct GaussRule {
    std::vector<double> nodes, weights;
};

GaussRule compute_gauss(int n) {
    // Newton iteration on Legendre polynomials; standard Golub-free variant.
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& gauss_rule(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

// Merge breakpoints into [a,b] and return sorted cell boundaries.
std::vector<double> make_cells(double a, double b, const std::vector<double>& bps) {
    std::vector<double> xs;
    xs.push_back(a);
    xs.push_back(b);
    for (double t : bps) {
        if (t > a && t < b) xs.push_back(t);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-15; }),
             xs.end());
    return xs;
}

} // namespace

const std::vector<double>& gauss_nodes(int order) { return gauss_rule(order).nodes; }
const std::vector<double>& gauss_weights(int order) { return gauss_rule(order).weights; }

double integrate_cells(const Real1D& f, double a, double b,
                       const std::vector<double>& breakpoints, int gauss_order) {
    const auto& gn = gauss_nodes(gauss_order);
    const auto& gw = gauss_weights(gauss_order);
    const auto xs = make_cells(a, b, breakpoints);
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
        const double mid = 0.5 * (xs[c] + xs[c + 1]);
        const double half = 0.5 * (xs[c + 1] - xs[c]);
        double s = 0.0;
        for (std::size_t i = 0; i < gn.size(); ++i) s += gw[i] * f(mid + half * gn[i]);
        total += s * half;
    }
    return total;
}

std::complex<double> integrate_cells_c(const Cplx1D& f, double a, double b,
                                       const std::vector<double>& breakpoints,
                                       int gauss_order) {
    const auto& gn = gauss_nodes(gauss_order);
    const auto& gw = gauss_weights(gauss_order);
    const auto xs = make_cells(a, b, breakpoints);
    std::complex<double> total = 0.0;
    for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
        const double mid = 0.5 * (xs[c] + xs[c + 1]);
        const double half = 0.5 * (xs[c + 1] - xs[c]);
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < gn.size(); ++i) s += gw[i] * f(mid + half * gn[i]);
        total += s * half;
    }
    return total;
}

namespace {

std::complex<double> oscillatory_impl(const Cplx1D& f, double a, double b,
                                      const Real1D& local_freq,
                                      const std::vector<double>& breakpoints,
                                      const QuadratureSpec& spec, double density) {
    const auto xs = make_cells(a, b, breakpoints);
    const auto& gn = gauss_nodes(spec.gauss_order);
    const auto& gw = gauss_weights(spec.gauss_order);
    std::complex<double> total = 0.0;
    long panels_used = 0;
    // March panels from left to right, sizing each from the frequency at its
    // endpoints (our phase derivatives are piecewise monotone, so endpoint
    // maxima bound the panel).
    auto width_at = [&](double x) {
        const double freq = std::max(local_freq(x), 1e-30);
        return 2.0 * M_PI / freq * spec.gauss_order /
               (spec.points_per_wavelength * density);
    };
    for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
        const double lo = xs[c], hi = xs[c + 1];
        double x = lo;
        while (x < hi) {
            double w = std::min(width_at(x), hi - x);
            w = std::min(w, width_at(std::min(hi, x + w)));
            w = std::min(w, hi - x);
            if (++panels_used > spec.max_panels)
                throw QuadratureError("integrate_oscillatory: panel budget exhausted",
                                      static_cast<double>(panels_used));
            const double mid = x + 0.5 * w, half = 0.5 * w;
            std::complex<double> s = 0.0;
            for (std::size_t i = 0; i < gn.size(); ++i)
                s += gw[i] * f(mid + half * gn[i]);
            total += s * half;
            x += w;
        }
    }
    return total;
}

} // namespace

std::complex<double> integrate_oscillatory(const Cplx1D& f, double a, double b,
                                           const Real1D& local_freq,
                                           const std::vector<double>& breakpoints,
                                           const QuadratureSpec& spec) {
    return oscillatory_impl(f, a, b, local_freq, breakpoints, spec, 1.0);
}

std::complex<double> integrate_oscillatory_checked(
    const Cplx1D& f, double a, double b, const Real1D& local_freq,
    const std::vector<double>& breakpoints, const QuadratureSpec& spec,
    double scale) {
    const auto v1 = oscillatory_impl(f, a, b, local_freq, breakpoints, spec, 1.0);
    const auto v2 = oscillatory_impl(f, a, b, local_freq, breakpoints, spec, 2.0);
    const double dis = std::abs(v1 - v2);
    if (dis > spec.tol * std::max(scale, std::abs(v2)))
        throw QuadratureError("integrate_oscillatory: step-halving disagreement", dis);
    return v2;
}

std::complex<double> integrate_oscillatory_box(
    const CplxND& f, const Cube& box,
    const std::function<double(int axis)>& axis_freq_bound,
    const std::vector<std::vector<double>>& axis_breakpoints,
    const QuadratureSpec& spec) {
    const int dim = box.dim;
    const auto& gn = gauss_nodes(spec.gauss_order);
    const auto& gw = gauss_weights(spec.gauss_order);

    // Per-axis panel grids.
    std::vector<std::vector<double>> grids(dim);
    long total_panels = 1;
    for (int ax = 0; ax < dim; ++ax) {
        const auto xs = make_cells(box.lo(ax), box.hi(ax),
                                   ax < static_cast<int>(axis_breakpoints.size())
                                       ? axis_breakpoints[ax]
                                       : std::vector<double>{});
        std::vector<double> g;
        const double freq = std::max(axis_freq_bound(ax), 1e-30);
        const double max_w =
            2.0 * M_PI / freq * spec.gauss_order / spec.points_per_wavelength;
        for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
            int np = std::max(1, static_cast<int>(std::ceil(
                                     (xs[c + 1] - xs[c]) / std::max(max_w, 1e-300))));
            for (int p = 0; p <= np; ++p)
                g.push_back(xs[c] + (xs[c + 1] - xs[c]) * p / np);
        }
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        total_panels *= static_cast<long>(g.size() - 1);
        if (total_panels > spec.max_panels)
            throw QuadratureError("integrate_oscillatory_box: panel budget exhausted",
                                  static_cast<double>(total_panels));
        grids[ax] = std::move(g);
    }

    // Iterate over the tensor product of panels.
    std::vector<std::size_t> idx(dim, 0);
    std::complex<double> total = 0.0;
    Point x(dim);
    while (true) {
        // Gauss product on this panel.
        std::vector<std::size_t> gi(dim, 0);
        while (true) {
            double wgt = 1.0;
            for (int ax = 0; ax < dim; ++ax) {
                const double lo = grids[ax][idx[ax]], hi = grids[ax][idx[ax] + 1];
                const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                x[ax] = mid + half * gn[gi[ax]];
                wgt *= gw[gi[ax]] * half;
            }
            total += wgt * f(x);
            int ax = 0;
            while (ax < dim) {
                if (++gi[ax] < gn.size()) break;
                gi[ax] = 0;
                ++ax;
            }
            if (ax == dim) break;
        }
        int ax = 0;
        while (ax < dim) {
            if (++idx[ax] < grids[ax].size() - 1) break;
            idx[ax] = 0;
            ++ax;
        }
        if (ax == dim) break;
    }
    return total;
}

} // namespace extlab
