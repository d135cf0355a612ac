#ifndef EXTLAB_GEOMETRY_HPP
#define EXTLAB_GEOMETRY_HPP

#include <cstdint>
#include <vector>

namespace extlab {

using Point = std::vector<double>;

// Half-open axis-aligned cube: prod_i [center_i - side/2, center_i + side/2).
// The half-open convention makes dyadic tilings exact.
struct Cube {
    int dim = 1;
    Point center;
    double side = 1.0;

    Cube() = default;
    Cube(int dim, Point center, double side);

    static Cube unit(int dim);  // side 1, centered at the origin

    double lo(int i) const { return center[i] - 0.5 * side; }
    double hi(int i) const { return center[i] + 0.5 * side; }
    double volume() const;
    bool contains(const Point& x) const;
    bool intersects(const Cube& other) const;

    // The 2^dim half-open children of side/2 tiling this cube.  Child index
    // bit i is set when the child sits in the upper half along axis i.
    std::vector<Cube> children() const;

    // Cube with the same center and side scaled by a factor.
    Cube dilated(double factor) const;
};

// Translated dyadic grid D + shift, shift in [-1,1]^dim.  Cubes at scale s
// are { 2^{-s} (k + [0,1)^dim) + shift : k integer }.
struct Grid {
    int dim = 1;
    Point shift;

    Grid() = default;
    Grid(int dim, Point shift);
    static Grid standard(int dim) { return Grid(dim, Point(dim, 0.0)); }

    // The grid cube with integer index k at scale s.
    Cube cube_at(const std::vector<std::int64_t>& k, int s) const;
};

// Gamma_s = 2^{-s} {-N,...,N}^dim with N = 2^s; (2N+1)^dim points.
struct Lattice {
    int dim = 1;
    int s = 0;
    std::int64_t N = 1;

    Lattice(int dim, int s);

    std::int64_t points_per_axis() const { return 2 * N + 1; }
    std::int64_t size() const;

    // Lattice point 2^{-s} k for flat index in [0, size()).
    std::vector<std::int64_t> index_to_k(std::int64_t flat) const;
    std::int64_t k_to_index(const std::vector<std::int64_t>& k) const;
    Point point(std::int64_t flat) const;
};

// Every grid cube of side 2^{-s} whose (half-open) interior meets U.
std::vector<Cube> cubes_at_scale(const Grid& grid, int s, const Cube& U);

// The unique nu in [0, 2^{-s})^dim with grid cubes = standard cubes + nu;
// nu = shift mod 2^{-s} componentwise.
Point nu_of_grid(const Grid& grid, int s);

} // namespace extlab

#endif
