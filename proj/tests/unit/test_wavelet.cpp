#include <doctest.h>

#include <cmath>
#include <vector>

#include "extlab/alpert.hpp"
#include "extlab/errors.hpp"
#include "extlab/fit.hpp"
#include "extlab/mollifier.hpp"
#include "extlab/rng.hpp"
#include "extlab/smooth_wavelet.hpp"

using namespace extlab;

namespace {

// Independent moment-matrix rank oracle: count rows/columns directly.
int rank_oracle(int dim, int kappa) {
    // The constraint matrix always has full row rank M here (checked in the
    // library), so the family size is 2^dim * M - M.
    const int M = static_cast<int>(monomials_up_to(dim, kappa - 1).size());
    return ((1 << dim) - 1) * M;
}

// Simpson oracle for 1D integrals of wavelet * x^beta over [a, b].
double simpson_moment(const SmoothWavelet& w, int beta, double a, double b, int n) {
    double h = (b - a) / n, s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * h;
        const double fx = w.eval({x}) * std::pow(x, beta);
        s += fx * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
}

} // namespace

TEST_CASE("alpert family sizes") {
    CHECK(build_alpert_family(1, 1).size() == 1);
    CHECK(build_alpert_family(1, 2).size() == 2);
    CHECK(build_alpert_family(2, 1).size() == 3);
    CHECK(build_alpert_family(1, 1).size() == rank_oracle(1, 1));
    CHECK(build_alpert_family(1, 2).size() == rank_oracle(1, 2));
    CHECK(build_alpert_family(2, 1).size() == rank_oracle(2, 1));
    CHECK(build_alpert_family(2, 2).size() == rank_oracle(2, 2));
    CHECK(build_alpert_family(2, 3).size() == rank_oracle(2, 3));
}

TEST_CASE("kappa=1 dim=1 is the Haar function") {
    auto fam = build_alpert_family(1, 1);
    REQUIRE(fam.size() == 1);
    // On the translated cube [0,1): +1 on [0,1/2), -1 on [1/2,1).
    Cube Q(1, {0.5}, 1.0);
    auto h = plain_wavelet(fam, 0, Q);
    CHECK(h.eval({0.25}) == doctest::Approx(1.0));
    CHECK(h.eval({0.75}) == doctest::Approx(-1.0));
    CHECK(h.eval({1.25}) == doctest::Approx(0.0));

    QuadratureSpec quad;
    CHECK(std::abs(moment(h, {0}, quad)) < 1e-14);
    CHECK(moment(h, {1}, quad) == doctest::Approx(-0.25).epsilon(1e-13));
}

TEST_CASE("orthonormality and moment vanishing of plain families") {
    QuadratureSpec quad;
    for (auto [dim, kappa] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 2}}) {
        auto fam = build_alpert_family(dim, kappa);
        const Cube Q = Cube::unit(dim);
        for (int i = 0; i < fam.size(); ++i) {
            auto wi = plain_wavelet(fam, i, Q);
            for (int j = i; j < fam.size(); ++j) {
                auto wj = plain_wavelet(fam, j, Q);
                const double g = inner_product(wi, wj, quad);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
            for (const auto& beta : monomials_up_to(dim, kappa - 1)) {
                CHECK(std::abs(moment(wi, beta, quad)) < 1e-10);
            }
        }
    }
}

TEST_CASE("mollifier closed forms") {
    // dim=1, kappa=1, r=2: q = 15/16 since int (1-x^2)^2 = 16/15.
    auto m1 = build_mollifier(1, 1, 2);
    REQUIRE(m1.q.terms().size() == 1);
    CHECK(m1.q.terms()[0].c == doctest::Approx(15.0 / 16.0).epsilon(1e-13));

    // kappa=2 equals kappa=1 by odd symmetry.
    auto m2 = build_mollifier(1, 2, 2);
    CHECK(m2.eval({0.3}) == doctest::Approx(m1.eval({0.3})).epsilon(1e-13));

    // kappa=3, r=3: solve the 2x2 Hankel system independently and compare.
    auto m3 = build_mollifier(1, 3, 3);
    auto chi = [&](int n) {  // int x^n (1-x^2)^3 dx via the bump moments
        Mollifier tmp;
        tmp.dim = 1;
        tmp.r = 3;
        return tmp.partial_moment(n, -1.0, 1.0);
    };
    const double c0 = chi(0), c2 = chi(2), c4 = chi(4);
    const double det = c0 * c4 - c2 * c2;
    const double qa = c4 / det, qb = -c2 / det;  // q(x) = qa + qb x^2
    CHECK(m3.eval({0.5}) ==
          doctest::Approx((qa + qb * 0.25) * std::pow(1 - 0.25, 3)).epsilon(1e-11));
    // Unit mass and dead second moment.
    std::vector<int> g0{0}, g2{2};
    CHECK(m3.moment(g0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m3.moment(g2)) < 1e-12);
}

TEST_CASE("mollifier moments dim=2") {
    auto m = build_mollifier(2, 3, 5);
    CHECK(m.moment({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    for (auto g : {std::vector<int>{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
        CHECK(std::abs(m.moment(g)) < 1e-12);
    }
}

TEST_CASE("smooth wavelet coincides with plain outside the halo") {
    auto fam = build_alpert_family(1, 2);
    auto mol = build_mollifier(1, 2, 4);
    const double eta = 1.0 / 64.0;
    Cube Q(1, {0.0}, 1.0);
    auto ws = smooth_wavelet(fam, 1, Q, eta, mol);
    auto wp = plain_wavelet(fam, 1, Q);
    // Points farther than eta from the skeleton {-1/2, 0, 1/2}.
    for (double x : {-0.4, -0.22, -0.05, 0.07, 0.3, 0.45}) {
        CHECK(ws.eval({x}) == doctest::Approx(wp.eval({x})).epsilon(1e-12));
    }
    // And they differ inside the halo.
    CHECK(std::abs(ws.eval({0.004}) - wp.eval({0.004})) > 1e-3);
}

TEST_CASE("smooth wavelet moment vanishing") {
    QuadratureSpec quad;
    auto mol3 = build_mollifier(1, 3, 5);
    const double eta = 1.0 / 16.0;

    auto fam1 = build_alpert_family(1, 1);
    auto h1 = smooth_wavelet(fam1, 0, Cube(1, {0.5}, 1.0), eta, mol3);
    CHECK(std::abs(moment(h1, {0}, quad)) < 1e-10);

    auto fam2 = build_alpert_family(1, 2);
    for (int a = 0; a < fam2.size(); ++a) {
        auto h = smooth_wavelet(fam2, a, Cube(1, {0.0}, 1.0), eta, mol3);
        CHECK(std::abs(moment(h, {0}, quad)) < 1e-10);
        CHECK(std::abs(moment(h, {1}, quad)) < 1e-10);
    }

    auto fam3 = build_alpert_family(1, 3);
    for (int a = 0; a < fam3.size(); ++a) {
        auto h = smooth_wavelet(fam3, a, Cube(1, {0.0}, 1.0), eta, mol3);
        CHECK(std::abs(moment(h, {2}, quad)) < 1e-9);
    }
}

TEST_CASE("smooth wavelet against Simpson oracle") {
    auto fam = build_alpert_family(1, 2);
    auto mol = build_mollifier(1, 2, 4);
    Cube Q(1, {0.25}, 0.5);
    auto w = smooth_wavelet(fam, 0, Q, 1.0 / 16.0, mol);
    QuadratureSpec quad;
    const double lib = moment(w, {1}, quad);
    const double orc = simpson_moment(w, 1, Q.lo(0) - 0.1, Q.hi(0) + 0.1, 20000);
    CHECK(lib == doctest::Approx(orc).epsilon(1e-8));
}

TEST_CASE("translation/dilation covariance") {
    auto fam = build_alpert_family(1, 2);
    auto mol = build_mollifier(1, 2, 4);
    const double eta = 1.0 / 32.0;
    Cube Q0 = Cube::unit(1);
    Cube Q(1, {0.375}, 0.25);
    auto w0 = smooth_wavelet(fam, 1, Q0, eta, mol);
    auto w = smooth_wavelet(fam, 1, Q, eta, mol);
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(Q.lo(0) - 0.02, Q.hi(0) + 0.02);
        const double u = (x - Q.center[0]) / Q.side;
        const double want = std::pow(Q.side, -0.5) * w0.eval({u});
        CHECK(w.eval({x}) == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("smooth wavelets nearly orthonormal") {
    QuadratureSpec quad;
    auto fam = build_alpert_family(1, 2);
    auto mol = build_mollifier(1, 2, 4);
    const double eta = 1.0 / 64.0;
    Cube Q = Cube::unit(1);
    for (int i = 0; i < fam.size(); ++i) {
        auto wi = smooth_wavelet(fam, i, Q, eta, mol);
        const double d = inner_product(wi, wi, quad);
        CHECK(std::abs(d - 1.0) < 5 * eta);
    }
    // Sibling pairing is O(eta).
    Cube Qr(1, {1.0}, 1.0);
    auto a = smooth_wavelet(fam, 0, Q, eta, mol);
    auto b = smooth_wavelet(fam, 0, Qr, eta, mol);
    CHECK(std::abs(inner_product(a, b, quad)) < 5 * eta);
}

TEST_CASE("cross-scale inner product decay law") {
    // |<h_I^eta, h_J^eta>| ~ eta^{-kappa} (l(J)/l(I))^{kappa + n/2} for small J
    // inside the halo of I's skeleton; fitted slope >= kappa + 1/2 - 0.3.
    QuadratureSpec quad;
    const int kappa = 2;
    auto fam = build_alpert_family(1, kappa);
    auto mol = build_mollifier(1, kappa, 4);
    const double eta = 1.0 / 16.0;
    Cube I = Cube::unit(1);
    auto wI = smooth_wavelet(fam, 0, I, eta, mol);
    std::vector<double> ratios, mags;
    for (int sj = 6; sj <= 10; ++sj) {
        const double lJ = std::ldexp(1.0, -sj);
        // J centered inside the eta/2-halo of the skeleton point 0.
        Cube J(1, {eta / 4.0}, lJ);
        auto wJ = smooth_wavelet(fam, 0, J, eta, mol);
        double best = 0.0;
        for (int m = 0; m < fam.size(); ++m) {
            auto wJm = smooth_wavelet(fam, m, J, eta, mol);
            best = std::max(best, std::abs(inner_product(wI, wJm, quad)));
        }
        ratios.push_back(lJ);
        mags.push_back(best);
    }
    auto fit = loglog_fit(ratios, mags, false, 1e-300);
    CHECK(fit.slope >= kappa + 0.5 - 0.3);
}

TEST_CASE("family and mollifier JSON round trip exactly") {
    auto fam = build_alpert_family(2, 2);
    auto rt = family_from_json(family_to_json(fam));
    REQUIRE(rt.size() == fam.size());
    for (int m = 0; m < fam.size(); ++m) {
        for (std::size_t p = 0; p < fam.members[m].pieces.size(); ++p) {
            const auto& t1 = fam.members[m].pieces[p].terms();
            const auto& t2 = rt.members[m].pieces[p].terms();
            REQUIRE(t1.size() == t2.size());
            for (std::size_t k = 0; k < t1.size(); ++k) {
                CHECK(t1[k].c == t2[k].c);  // bit-exact
                CHECK(t1[k].exps == t2[k].exps);
            }
        }
    }
    auto mol = build_mollifier(2, 3, 5);
    auto mrt = mollifier_from_json(mollifier_to_json(mol));
    REQUIRE(mrt.q.terms().size() == mol.q.terms().size());
    for (std::size_t k = 0; k < mol.q.terms().size(); ++k)
        CHECK(mrt.q.terms()[k].c == mol.q.terms()[k].c);
}

TEST_CASE("ill-conditioned construction reports") {
    CHECK_THROWS_AS(build_alpert_family(1, 25), IllConditionedError);
}
