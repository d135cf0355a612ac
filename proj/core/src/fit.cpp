#include "extlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "extlab/errors.hpp"

namespace extlab {

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error("linear_fit: need at least two points");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14 * (1.0 + sxx) * n)
        throw Error("linear_fit: degenerate abscissae");
    FitResult r;
    r.slope = (n * sxy - sx * sy) / det;
    r.intercept = (sy - r.slope * sx) / n;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (r.slope * x[i] + r.intercept);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / n);
    r.npoints = n;
    return r;
}

FitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                     bool drop_extremes, double floor) {
    if (x.size() != y.size()) throw Error("loglog_fit: size mismatch");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > floor) pts.emplace_back(x[i], y[i]);
    }
    std::sort(pts.begin(), pts.end());
    if (drop_extremes && pts.size() >= 5) {
        pts.erase(pts.begin());
        pts.pop_back();
    }
    if (pts.size() < 2) throw Error("loglog_fit: fewer than two usable points");
    std::vector<double> lx, ly;
    lx.reserve(pts.size());
    ly.reserve(pts.size());
    for (auto& [a, b] : pts) {
        lx.push_back(std::log(a));
        ly.push_back(std::log(b));
    }
    return linear_fit(lx, ly);
}

} // namespace extlab
