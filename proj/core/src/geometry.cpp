#include "extlab/geometry.hpp"

#include <cmath>

#include "extlab/errors.hpp"

namespace extlab {

Cube::Cube(int dim_, Point center_, double side_)
    : dim(dim_), center(std::move(center_)), side(side_) {
    if (dim < 1) throw DimensionError("Cube: dim must be >= 1");
    if (static_cast<int>(center.size()) != dim)
        throw DimensionError("Cube: center length != dim");
    if (!(side > 0)) throw Error("Cube: side must be positive");
}

Cube Cube::unit(int dim) { return Cube(dim, Point(dim, 0.0), 1.0); }

double Cube::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= side;
    return v;
}

bool Cube::contains(const Point& x) const {
    for (int i = 0; i < dim; ++i) {
        if (x[i] < lo(i) || x[i] >= hi(i)) return false;
    }
    return true;
}

bool Cube::intersects(const Cube& other) const {
    for (int i = 0; i < dim; ++i) {
        if (lo(i) >= other.hi(i) || other.lo(i) >= hi(i)) return false;
    }
    return true;
}

std::vector<Cube> Cube::children() const {
    std::vector<Cube> out;
    const int n = 1 << dim;
    out.reserve(n);
    for (int b = 0; b < n; ++b) {
        Point c(dim);
        for (int i = 0; i < dim; ++i) {
            const double off = (b >> i) & 1 ? 0.25 * side : -0.25 * side;
            c[i] = center[i] + off;
        }
        out.emplace_back(dim, std::move(c), 0.5 * side);
    }
    return out;
}

Cube Cube::dilated(double factor) const { return Cube(dim, center, side * factor); }

Grid::Grid(int dim_, Point shift_) : dim(dim_), shift(std::move(shift_)) {
    if (dim < 1) throw DimensionError("Grid: dim must be >= 1");
    if (static_cast<int>(shift.size()) != dim)
        throw DimensionError("Grid: shift length != dim");
    for (double v : shift) {
        if (v < -1.0 || v > 1.0) throw Error("Grid: shift component outside [-1,1]");
    }
}

Cube Grid::cube_at(const std::vector<std::int64_t>& k, int s) const {
    const double h = std::ldexp(1.0, -s);
    Point c(dim);
    for (int i = 0; i < dim; ++i) c[i] = h * (static_cast<double>(k[i]) + 0.5) + shift[i];
    return Cube(dim, std::move(c), h);
}

Lattice::Lattice(int dim_, int s_) : dim(dim_), s(s_) {
    if (dim < 1) throw DimensionError("Lattice: dim must be >= 1");
    if (s < 0) throw Error("Lattice: s must be >= 0");
    N = std::int64_t{1} << s;
}

std::int64_t Lattice::size() const {
    std::int64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= points_per_axis();
    return n;
}

std::vector<std::int64_t> Lattice::index_to_k(std::int64_t flat) const {
    std::vector<std::int64_t> k(dim);
    const std::int64_t p = points_per_axis();
    for (int i = 0; i < dim; ++i) {
        k[i] = flat % p - N;
        flat /= p;
    }
    return k;
}

std::int64_t Lattice::k_to_index(const std::vector<std::int64_t>& k) const {
    const std::int64_t p = points_per_axis();
    std::int64_t flat = 0;
    for (int i = dim - 1; i >= 0; --i) flat = flat * p + (k[i] + N);
    return flat;
}

Point Lattice::point(std::int64_t flat) const {
    const auto k = index_to_k(flat);
    const double h = std::ldexp(1.0, -s);
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = h * static_cast<double>(k[i]);
    return p;
}

std::vector<Cube> cubes_at_scale(const Grid& grid, int s, const Cube& U) {
    if (grid.dim != U.dim) throw DimensionError("cubes_at_scale: dimension mismatch");
    if (s < 0) throw Error("cubes_at_scale: s must be >= 0");
    const double h = std::ldexp(1.0, -s);

    // Per-axis index ranges of grid cubes [h k + v, h (k+1) + v) meeting
    // the half-open interval [lo, hi).
    std::vector<std::int64_t> kmin(U.dim), kmax(U.dim);
    for (int i = 0; i < U.dim; ++i) {
        const double v = grid.shift[i];
        std::int64_t k0 = static_cast<std::int64_t>(std::floor((U.lo(i) - v) / h));
        // Guard against rounding: move until the cube actually meets [lo, hi).
        while (h * static_cast<double>(k0 + 1) + v <= U.lo(i)) ++k0;
        while (h * static_cast<double>(k0) + v > U.lo(i)) --k0;
        if (h * static_cast<double>(k0 + 1) + v <= U.lo(i)) ++k0;
        std::int64_t k1 = k0;
        while (h * static_cast<double>(k1 + 1) + v < U.hi(i)) ++k1;
        kmin[i] = k0;
        kmax[i] = k1;
    }

    std::vector<Cube> out;
    std::vector<std::int64_t> k(kmin);
    while (true) {
        out.push_back(grid.cube_at(k, s));
        int axis = 0;
        while (axis < U.dim) {
            if (++k[axis] <= kmax[axis]) break;
            k[axis] = kmin[axis];
            ++axis;
        }
        if (axis == U.dim) break;
    }
    return out;
}

Point nu_of_grid(const Grid& grid, int s) {
    if (s < 0) throw Error("nu_of_grid: s must be >= 0");
    const double h = std::ldexp(1.0, -s);
    Point nu(grid.dim);
    for (int i = 0; i < grid.dim; ++i) {
        double r = std::fmod(grid.shift[i], h);
        if (r < 0) r += h;
        if (r >= h) r -= h;
        nu[i] = r;
    }
    return nu;
}

} // namespace extlab
