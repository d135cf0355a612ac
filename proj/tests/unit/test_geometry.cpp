#include <doctest.h>

#include <cmath>
#include <complex>

#include "extlab/geometry.hpp"
#include "extlab/rng.hpp"
#include "extlab/sampler.hpp"

using namespace extlab;

TEST_CASE("cube children tile the parent") {
    Cube Q(2, {0.25, -0.5}, 0.5);
    auto ch = Q.children();
    REQUIRE(ch.size() == 4);
    double vol = 0;
    for (auto& c : ch) {
        vol += c.volume();
        CHECK(c.side == doctest::Approx(0.25));
    }
    CHECK(vol == doctest::Approx(Q.volume()));
    // Disjoint half-open interiors: a sample point lands in exactly one child.
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        Point x = {Q.lo(0) + rng.uniform() * Q.side, Q.lo(1) + rng.uniform() * Q.side};
        int hits = 0;
        for (auto& c : ch) hits += c.contains(x) ? 1 : 0;
        CHECK(hits == 1);
    }
}

TEST_CASE("cubes_at_scale identity cases") {
    // standard grid, U = [0,1), s = 1, dim = 1 -> {[0,1/2), [1/2,1)}
    Grid g = Grid::standard(1);
    Cube U(1, {0.5}, 1.0);
    auto cs = cubes_at_scale(g, 1, U);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].lo(0) == doctest::Approx(0.0));
    CHECK(cs[0].hi(0) == doctest::Approx(0.5));
    CHECK(cs[1].lo(0) == doctest::Approx(0.5));
    CHECK(cs[1].hi(0) == doctest::Approx(1.0));

    // s = 0, U equal to one grid cube -> {U}
    Cube U0(1, {0.5}, 1.0);
    auto cs0 = cubes_at_scale(g, 0, U0);
    REQUIRE(cs0.size() == 1);
    CHECK(cs0[0].lo(0) == doctest::Approx(0.0));
    CHECK(cs0[0].side == doctest::Approx(1.0));
}

TEST_CASE("cubes_at_scale with shift 1/4") {
    // v = 1/4, U = [0,1), s = 1 -> {[-1/4,1/4), [1/4,3/4), [3/4,5/4)}
    Grid g(1, {0.25});
    Cube U(1, {0.5}, 1.0);
    auto cs = cubes_at_scale(g, 1, U);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].lo(0) == doctest::Approx(-0.25));
    CHECK(cs[1].lo(0) == doctest::Approx(0.25));
    CHECK(cs[2].lo(0) == doctest::Approx(0.75));
    CHECK(cs[2].hi(0) == doctest::Approx(1.25));
}

TEST_CASE("nu_of_grid") {
    CHECK(nu_of_grid(Grid::standard(3), 4) == Point{0, 0, 0});
    Grid g1(1, {0.3});
    CHECK(nu_of_grid(g1, 1)[0] == doctest::Approx(0.3));
    Grid g2(1, {0.7});
    CHECK(nu_of_grid(g2, 1)[0] == doctest::Approx(0.2));
    Grid g3(1, {-0.3});
    CHECK(nu_of_grid(g3, 1)[0] == doctest::Approx(0.2));
}

TEST_CASE("tiling and shift-consistency properties") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + static_cast<int>(rng.bits() % 2);
        const int s = static_cast<int>(rng.bits() % 4);
        Point v(dim);
        for (auto& c : v) c = rng.uniform(-1.0, 1.0);
        Grid g(dim, v);
        Point uc(dim);
        for (auto& c : uc) c = rng.uniform(-0.5, 0.5);
        Cube U(dim, uc, 0.25 + 0.5 * rng.uniform());

        auto cs = cubes_at_scale(g, s, U);
        // Tiling: total overlap volume equals |U|; random points of U lie in
        // exactly one cube.
        for (int t = 0; t < 50; ++t) {
            Point x(dim);
            for (int i = 0; i < dim; ++i) x[i] = U.lo(i) + rng.uniform() * U.side;
            int hits = 0;
            for (auto& c : cs) hits += c.contains(x) ? 1 : 0;
            CHECK(hits == 1);
        }
        // Shift consistency: cubes(grid, s, U) = cubes(standard, s, U - nu) + nu.
        const Point nu = nu_of_grid(g, s);
        Point uc2 = uc;
        for (int i = 0; i < dim; ++i) uc2[i] -= nu[i];
        auto cs2 = cubes_at_scale(Grid::standard(dim), s, Cube(dim, uc2, U.side));
        REQUIRE(cs.size() == cs2.size());
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (int i = 0; i < dim; ++i)
                CHECK(cs[j].center[i] ==
                      doctest::Approx(cs2[j].center[i] + nu[i]).epsilon(1e-12));
    }
}

TEST_CASE("grid_expectation basics") {
    auto one = [](const Point&) { return std::complex<double>(1.0, 0.0); };
    CHECK(std::abs(grid_expectation(2, one, ShiftSampler::lattice(8)) - 1.0) < 1e-14);

    auto odd = [](const Point& v) { return std::complex<double>(v[0], 0.0); };
    CHECK(std::abs(grid_expectation(1, odd, ShiftSampler::lattice(16))) < 1e-14);

    // Full periods of e^{2 pi i 4 v} average to zero under the midpoint rule.
    auto wave = [](const Point& v) {
        return std::exp(std::complex<double>(0.0, 2.0 * M_PI * 4.0 * v[0]));
    };
    CHECK(std::abs(grid_expectation(1, wave, ShiftSampler::lattice(64))) < 1e-12);

    // Monte Carlo agrees within sampling error.
    auto quad = [](const Point& v) { return std::complex<double>(v[0] * v[0], 0.0); };
    auto mc = grid_expectation(1, quad, ShiftSampler::montecarlo(20000, 5));
    CHECK(std::abs(mc - 1.0 / 3.0) < 0.02);

    // Lattice refinement: n and 2n agree for smooth F.
    auto smooth = [](const Point& v) {
        return std::complex<double>(std::cos(1.7 * v[0]), std::sin(0.3 * v[0]));
    };
    auto a1 = grid_expectation(1, smooth, ShiftSampler::lattice(128));
    auto a2 = grid_expectation(1, smooth, ShiftSampler::lattice(256));
    CHECK(std::abs(a1 - a2) < 1e-4);

    CHECK_THROWS(grid_expectation(1, one, ShiftSampler::lattice(0)));
}

TEST_CASE("grid_expectation periodic reduction") {
    // F with period 2^-2 = 0.25: reduction to one period gives the same
    // average as the full box.
    auto F = [](const Point& v) {
        return std::exp(std::complex<double>(0.0, 2.0 * M_PI * 8.0 * v[0])) +
               std::complex<double>(0.5, 0.0);
    };
    auto full = grid_expectation(1, F, ShiftSampler::lattice(256));
    auto red = grid_expectation(1, F, ShiftSampler::lattice(64, 2));
    CHECK(std::abs(full - red) < 1e-10);
}

TEST_CASE("lattice indexing round trip") {
    Lattice lat(2, 2);
    CHECK(lat.size() == 81);
    for (std::int64_t i = 0; i < lat.size(); ++i) {
        CHECK(lat.k_to_index(lat.index_to_k(i)) == i);
    }
    CHECK(lat.point(lat.k_to_index({-4, -4}))[0] == doctest::Approx(-1.0));
}
