#include "extlab/smooth_wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "extlab/errors.hpp"

namespace extlab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Exact value of (h0 * phi_eta)(u) on the mother cube, u in unit coordinates.
double smooth_unit_eval(const PiecewisePolynomial& pw, const Mollifier& moll,
                        double eta, const Point& u) {
    const int dim = pw.dim;
    const auto children = pw.supportCube.children();
    double total = 0.0;
    std::vector<double> wlo(dim), whi(dim);
    for (std::size_t c = 0; c < children.size(); ++c) {
        const Poly& p = pw.pieces[c];
        if (p.empty()) continue;
        // w-domain: intersection of [-1,1] with [(u - hi)/eta, (u - lo)/eta].
        bool empty = false;
        for (int i = 0; i < dim; ++i) {
            wlo[i] = std::max(-1.0, (u[i] - children[c].hi(i)) / eta);
            whi[i] = std::min(1.0, (u[i] - children[c].lo(i)) / eta);
            if (whi[i] <= wlo[i]) {
                empty = true;
                break;
            }
        }
        if (empty) continue;

        // Per-axis tables PM_n(wlo, whi) up to the needed degree.
        int maxn = 0;
        for (const auto& t : p.terms())
            for (int i = 0; i < dim; ++i) maxn = std::max(maxn, t.exps[i]);
        for (const auto& t : moll.q.terms())
            for (int i = 0; i < dim; ++i) maxn = std::max(maxn, t.exps[i]);
        maxn = 2 * maxn + 1;
        std::vector<std::vector<double>> PM(dim, std::vector<double>(maxn + 1));
        for (int i = 0; i < dim; ++i)
            for (int n = 0; n <= maxn; ++n)
                PM[i][n] = moll.partial_moment(n, wlo[i], whi[i]);

        // sum over p-terms (beta) and q-terms (delta) of
        //   c_beta q_delta prod_i [ sum_k C(beta_i,k) u_i^{beta_i-k} (-eta)^k
        //                           PM_{k+delta_i} ]
        for (const auto& tb : p.terms()) {
            for (const auto& td : moll.q.terms()) {
                double prod = tb.c * td.c;
                for (int i = 0; i < dim && prod != 0.0; ++i) {
                    double s = 0.0;
                    for (int k = 0; k <= tb.exps[i]; ++k) {
                        s += binom(tb.exps[i], k) * ipow(u[i], tb.exps[i] - k) *
                             ipow(-eta, k) * PM[i][k + td.exps[i]];
                    }
                    prod *= s;
                }
                total += prod;
            }
        }
    }
    return total;
}

} // namespace

double SmoothWavelet::eval(const Point& x) const {
    const int dim = Q.dim;
    Point u(dim);
    for (int i = 0; i < dim; ++i) u[i] = (x[i] - Q.center[i]) / Q.side;
    const double norm = std::pow(Q.side, -0.5 * dim);
    const auto& pw = family->members[member];
    if (!smooth) return norm * pw.eval_unit(u);
    for (int i = 0; i < dim; ++i) {
        if (u[i] < -0.5 - eta || u[i] > 0.5 + eta) return 0.0;
    }
    return norm * smooth_unit_eval(pw, *moll, eta, u);
}

Cube SmoothWavelet::support() const {
    return smooth ? Q.dilated(1.0 + 2.0 * eta) : Q;
}

std::vector<double> SmoothWavelet::axis_breakpoints(int axis) const {
    std::vector<double> out;
    const double base[3] = {-0.5, 0.0, 0.5};
    for (double b : base) {
        if (smooth) {
            out.push_back(Q.center[axis] + Q.side * (b - eta));
            out.push_back(Q.center[axis] + Q.side * b);
            out.push_back(Q.center[axis] + Q.side * (b + eta));
        } else {
            out.push_back(Q.center[axis] + Q.side * b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int SmoothWavelet::cell_degree() const {
    const int pdeg = family->kappa - 1;
    if (!smooth) return pdeg;
    // Convolution raises the per-cell degree by the bump degree.
    return pdeg + 2 * moll->r + moll->q.total_degree() + 1;
}

SmoothWavelet smooth_wavelet(const AlpertFamily& family, int member, const Cube& Q,
                             double eta, const Mollifier& moll) {
    if (moll.kappa < family.kappa)
        throw Error("smooth_wavelet: mollifier must kill moments up to the family order");
    if (!(eta > 0.0) || eta >= 0.5) throw Error("smooth_wavelet: need 0 < eta < 1/2");
    if (family.dim != Q.dim) throw DimensionError("smooth_wavelet: dimension mismatch");
    SmoothWavelet w;
    w.family = &family;
    w.moll = &moll;
    w.member = member;
    w.Q = Q;
    w.eta = eta;
    w.smooth = true;
    return w;
}

SmoothWavelet plain_wavelet(const AlpertFamily& family, int member, const Cube& Q) {
    SmoothWavelet w;
    w.family = &family;
    w.moll = nullptr;
    w.member = member;
    w.Q = Q;
    w.eta = 0.0;
    w.smooth = false;
    return w;
}

namespace {

// Tensor composite Gauss of a scalar integrand over a box with prescribed
// axis breakpoints.
template <typename T, typename F>
T tensor_cells_integral(const F& f, const Cube& box,
                        const std::vector<std::vector<double>>& axis_bps, int order) {
    const int dim = box.dim;
    const auto& gn = gauss_nodes(order);
    const auto& gw = gauss_weights(order);

    std::vector<std::vector<double>> cells(dim);
    for (int ax = 0; ax < dim; ++ax) {
        auto& xs = cells[ax];
        xs.push_back(box.lo(ax));
        xs.push_back(box.hi(ax));
        for (double b : axis_bps[ax])
            if (b > box.lo(ax) && b < box.hi(ax)) xs.push_back(b);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end(),
                             [](double u, double v) { return std::abs(u - v) < 1e-15; }),
                 xs.end());
    }

    std::vector<std::size_t> ic(dim, 0), ig(dim, 0);
    T total{};
    Point x(dim);
    while (true) {
        std::fill(ig.begin(), ig.end(), 0);
        while (true) {
            double wgt = 1.0;
            for (int ax = 0; ax < dim; ++ax) {
                const double lo = cells[ax][ic[ax]], hi = cells[ax][ic[ax] + 1];
                const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                x[ax] = mid + half * gn[ig[ax]];
                wgt *= gw[ig[ax]] * half;
            }
            total += wgt * f(x);
            int ax = 0;
            while (ax < dim) {
                if (++ig[ax] < gn.size()) break;
                ig[ax] = 0;
                ++ax;
            }
            if (ax == dim) break;
        }
        int ax = 0;
        while (ax < dim) {
            if (++ic[ax] < cells[ax].size() - 1) break;
            ic[ax] = 0;
            ++ax;
        }
        if (ax == dim) break;
    }
    return total;
}

int order_for_degree(int deg) { return std::min(20, deg / 2 + 3); }

} // namespace

double moment(const SmoothWavelet& w, const std::vector<int>& beta,
              const QuadratureSpec& quad) {
    const int dim = w.Q.dim;
    int bdeg = 0;
    for (int b : beta) bdeg += b;
    const int order = order_for_degree(w.cell_degree() + bdeg);
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax) bps[ax] = w.axis_breakpoints(ax);
    auto f = [&](const Point& x) {
        double v = w.eval(x);
        for (int i = 0; i < dim; ++i) v *= ipow(x[i], beta[i]);
        return v;
    };
    const double v1 = tensor_cells_integral<double>(f, w.support(), bps, order);
    const double v2 = tensor_cells_integral<double>(f, w.support(), bps, order + 3);
    const double scale = std::pow(w.Q.side, 1.0 - 0.5 * dim) + std::abs(v2);
    if (std::abs(v1 - v2) > quad.tol * scale)
        throw QuadratureError("moment: step-halving disagreement", std::abs(v1 - v2));
    return v2;
}

double inner_product(const SmoothWavelet& a, const SmoothWavelet& b,
                     const QuadratureSpec& quad) {
    if (a.Q.dim != b.Q.dim) throw DimensionError("inner_product: dimension mismatch");
    const int dim = a.Q.dim;
    const Cube sa = a.support(), sb = b.support();
    if (!sa.intersects(sb)) return 0.0;
    // Integrate over the smaller support; the product vanishes outside the
    // intersection, and the cell grid below has the intersection edges in it.
    const Cube box = sa.volume() < sb.volume() ? sa : sb;
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax) {
        auto v1 = a.axis_breakpoints(ax);
        auto v2 = b.axis_breakpoints(ax);
        v1.insert(v1.end(), v2.begin(), v2.end());
        // Clip to the intersection so cells outside contribute nothing anyway.
        v1.push_back(std::max(sa.lo(ax), sb.lo(ax)));
        v1.push_back(std::min(sa.hi(ax), sb.hi(ax)));
        std::sort(v1.begin(), v1.end());
        bps[ax] = std::move(v1);
    }
    const int order = order_for_degree(a.cell_degree() + b.cell_degree());
    auto f = [&](const Point& x) { return a.eval(x) * b.eval(x); };
    const double v1 = tensor_cells_integral<double>(f, box, bps, order);
    const double v2 = tensor_cells_integral<double>(f, box, bps, order + 3);
    if (std::abs(v1 - v2) > quad.tol * (1.0 + std::abs(v2)))
        throw QuadratureError("inner_product: step-halving disagreement",
                              std::abs(v1 - v2));
    return v2;
}

std::complex<double> inner_product_fn(
    const std::function<std::complex<double>(const Point&)>& f, const Cube& f_support,
    const SmoothWavelet& w, const QuadratureSpec& quad) {
    const int dim = w.Q.dim;
    const Cube sw = w.support();
    if (!sw.intersects(f_support)) return 0.0;
    std::vector<std::vector<double>> bps(dim);
    for (int ax = 0; ax < dim; ++ax) {
        bps[ax] = w.axis_breakpoints(ax);
        bps[ax].push_back(std::max(sw.lo(ax), f_support.lo(ax)));
        bps[ax].push_back(std::min(sw.hi(ax), f_support.hi(ax)));
    }
    const int order = std::min(20, order_for_degree(w.cell_degree()) + 4);
    auto g = [&](const Point& x) -> std::complex<double> {
        if (!f_support.contains(x)) return 0.0;
        return f(x) * w.eval(x);
    };
    const auto v1 = tensor_cells_integral<std::complex<double>>(g, sw, bps, order);
    const auto v2 = tensor_cells_integral<std::complex<double>>(g, sw, bps, order + 4);
    const double scale = std::pow(w.Q.side, 0.5 * dim) + std::abs(v2);
    if (std::abs(v1 - v2) > quad.tol * scale)
        throw QuadratureError("inner_product_fn: step-halving disagreement",
                              std::abs(v1 - v2));
    return v2;
}

} // namespace extlab
