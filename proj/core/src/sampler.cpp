#include "extlab/sampler.hpp"

#include <cmath>
#include <vector>

#include "extlab/errors.hpp"
#include "extlab/parallel.hpp"
#include "extlab/rng.hpp"

namespace extlab {

std::complex<double> grid_expectation(
    int dim, const std::function<std::complex<double>(const Point&)>& F,
    const ShiftSampler& sampler) {
    if (sampler.n < 1) throw Error("grid_expectation: sampler n must be >= 1");

    double a = -1.0, b = 1.0;
    if (sampler.periodic_scale >= 0) {
        a = 0.0;
        b = std::ldexp(1.0, -sampler.periodic_scale);
    }
    const double len = b - a;

    if (sampler.mode == ShiftSampler::Mode::montecarlo) {
        // Draw all sample points up front so the point set does not depend
        // on evaluation order.
        Rng rng(sampler.seed);
        std::vector<Point> pts(sampler.n, Point(dim));
        for (int i = 0; i < sampler.n; ++i)
            for (int d = 0; d < dim; ++d) pts[i][d] = a + len * rng.uniform();
        auto sum = parallel_sum<std::complex<double>>(
            pts.size(), [&](std::size_t i) { return F(pts[i]); });
        return sum / static_cast<double>(sampler.n);
    }

    // Tensor midpoint rule with n points per axis.
    const int n = sampler.n;
    std::int64_t total = 1;
    for (int d = 0; d < dim; ++d) total *= n;
    auto sum = parallel_sum<std::complex<double>>(
        static_cast<std::size_t>(total), [&](std::size_t flat) {
            Point v(dim);
            std::int64_t rem = static_cast<std::int64_t>(flat);
            for (int d = 0; d < dim; ++d) {
                const std::int64_t j = rem % n;
                rem /= n;
                v[d] = a + len * (static_cast<double>(j) + 0.5) / n;
            }
            return F(v);
        });
    return sum / static_cast<double>(total);
}

} // namespace extlab
