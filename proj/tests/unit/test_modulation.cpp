#include <doctest.h>

#include <cmath>

#include "extlab/modulation.hpp"
#include "extlab/rng.hpp"

using namespace extlab;

namespace {

struct ModFixture {
    AlpertFamily fam;
    Mollifier mol;
    ModConfig mc;

    ModFixture(int dim, int kappa, int s) {
        fam = build_alpert_family(dim, kappa);
        mol = build_mollifier(dim, kappa + 1, kappa + 3);
        mc.family = &fam;
        mc.moll = &mol;
        mc.eta = 1.0 / 64.0;
        mc.dim = dim;
        mc.s = s;
        mc.U = Cube(dim, Point(dim, 0.0), 0.25);
        mc.psi = make_psi(mc.U, 0.25, kappa + 2);
    }

    CoeffSeq random_seq(std::uint64_t seed) const {
        const Lattice lat = mc.lattice();
        CoeffSeq a;
        a.s = mc.s;
        a.members = fam.size();
        a.cubes = lattice_cubes(lat, Point(mc.dim, 0.0));
        a.values.resize(lat.size() * fam.size());
        Rng rng(seed);
        for (auto& v : a.values) v = rng.cnormal();
        return a;
    }
};

} // namespace

TEST_CASE("cutoff psi plateau / support / smooth transition") {
    auto psi = make_psi(Cube(1, {0.0}, 0.25), 0.25, 4);
    CHECK(psi.eval({0.0}) == 1.0);
    CHECK(psi.eval({0.03}) == 1.0);          // inside plateau (side 1/16)
    CHECK(psi.eval({0.2}) == 0.0);           // outside support
    const double mid = psi.eval({0.08});     // transition region
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    // C^1 at the plateau edge: finite differences stay small.
    const double p = 0.03125;
    const double d1 = (psi.eval({p + 1e-6}) - psi.eval({p - 1e-6})) / 2e-6;
    CHECK(std::abs(d1) < 1e-3);
}

TEST_CASE("modulated basis is orthonormal (Dirichlet kernel identity)") {
    ModFixture fx(1, 1, 3);
    const Lattice lat = fx.mc.lattice();
    const auto cubes = lattice_cubes(lat, {0.0});
    const double amp = std::pow(static_cast<double>(lat.size()), -0.5);
    for (std::int64_t m1 = 0; m1 < lat.size(); m1 += 5) {
        for (std::int64_t m2 = 0; m2 < lat.size(); m2 += 7) {
            const Point w1 = channel_omega(lat, lat.index_to_k(m1));
            const Point w2 = channel_omega(lat, lat.index_to_k(m2));
            cd dot = 0.0;
            for (const auto& Q : cubes)
                dot += std::polar(amp, w1[0] * Q.center[0]) *
                       std::conj(std::polar(amp, w2[0] * Q.center[0]));
            CHECK(std::abs(dot - (m1 == m2 ? 1.0 : 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("decompose: delta sequence has flat modulus") {
    ModFixture fx(1, 1, 3);
    const Lattice lat = fx.mc.lattice();
    CoeffSeq a;
    a.s = fx.mc.s;
    a.members = 1;
    a.cubes = lattice_cubes(lat, {0.0});
    a.values.assign(lat.size(), cd{});
    a.values[4] = 1.0;
    auto m = decompose(a, fx.mc);
    const double want = std::pow(static_cast<double>(lat.size()), -0.5);
    for (std::int64_t mi = 0; mi < lat.size(); ++mi)
        CHECK(std::abs(std::abs(m.at(mi, 0)) - want) < 1e-12);
}

TEST_CASE("decompose: Parseval and perfect reconstruction") {
    ModFixture fx(1, 2, 4);
    auto a = fx.random_seq(21);
    auto m = decompose(a, fx.mc);
    double pa = 0.0, pm = 0.0;
    for (const auto& v : a.values) pa += std::norm(v);
    for (const auto& v : m.values) pm += std::norm(v);
    CHECK(std::abs(pa - pm) < 1e-10 * pa);

    auto back = reconstruct(m, fx.mc, Point(1, 0.0));
    double diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        diff += std::norm(a.values[i] - back.values[i]);
    CHECK(std::sqrt(diff) < 1e-10 * std::sqrt(pa));

    // a = phi^{m0} -> unit vector at m0.
    const Lattice lat = fx.mc.lattice();
    const auto kp = lat.index_to_k(11);
    const Point w = channel_omega(lat, kp);
    CoeffSeq phi;
    phi.s = fx.mc.s;
    phi.members = 1;
    phi.cubes = lattice_cubes(lat, {0.0});
    phi.values.resize(lat.size());
    const double amp = std::pow(static_cast<double>(lat.size()), -0.5);
    for (std::int64_t n = 0; n < lat.size(); ++n)
        phi.values[n] = std::polar(amp, w[0] * phi.cubes[n].center[0]);
    auto mm = decompose(phi, fx.mc);
    for (std::int64_t mi = 0; mi < lat.size(); ++mi)
        CHECK(std::abs(mm.at(mi, 0) - (mi == 11 ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("multiplier M_psi") {
    ModFixture fx(1, 1, 4);
    auto a = fx.random_seq(3);
    auto b = multiplier_M_psi(a, fx.mc.psi);
    for (std::size_t n = 0; n < a.cubes.size(); ++n) {
        const double w = fx.mc.psi.eval(a.cubes[n].center);
        CHECK(b.at(n, 0) == a.at(n, 0) * w);
        if (fx.mc.psi.plateau.contains(a.cubes[n].center)) CHECK(b.at(n, 0) == a.at(n, 0));
        if (!fx.mc.psi.support.contains(a.cubes[n].center)) CHECK(b.at(n, 0) == cd{});
    }
}

TEST_CASE("commutation Q M_psi = M_psi Q on smooth Alpert polynomials") {
    ModFixture fx(1, 2, 3);
    Rng rng(9);
    // P_a supported inside U so psi-truncation stays in the frame region.
    const Lattice lat = fx.mc.lattice();
    const auto cubes = lattice_cubes(lat, Point(1, 0.0));
    std::vector<TestFunction::ExpTerm> terms;
    for (std::size_t n = 0; n < cubes.size(); ++n) {
        if (!fx.mc.U.intersects(cubes[n])) continue;
        for (int mem = 0; mem < fx.fam.size(); ++mem)
            terms.push_back({cubes[n], mem, rng.cnormal()});
    }
    auto Pa = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, terms);

    // Q(M_psi P_a) coefficients vs psi(c) * Q(P_a) coefficients.
    auto qa = lattice_coeffs(Pa, fx.mc, Point(1, 0.0));
    auto m_qa = multiplier_M_psi(qa, fx.mc.psi);

    std::vector<TestFunction::ExpTerm> terms_psi;
    for (const auto& t : terms)
        terms_psi.push_back({t.cube, t.member, t.coeff * fx.mc.psi.eval(t.cube.center)});
    auto MPa = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, terms_psi);
    auto q_ma = lattice_coeffs(MPa, fx.mc, Point(1, 0.0));

    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < q_ma.values.size(); ++i) {
        diff = std::max(diff, std::abs(q_ma.values[i] - m_qa.values[i]));
        scale = std::max(scale, std::abs(m_qa.values[i]));
    }
    CHECK(diff < 1e-6 * (1.0 + scale));
}

TEST_CASE("reconstruction of the extension input: sum_m <a,phi^m> g_m = M_psi Q f") {
    ModFixture fx(1, 2, 3);
    Rng rng(33);
    const Lattice lat = fx.mc.lattice();
    const auto cubes = lattice_cubes(lat, Point(1, 0.0));
    std::vector<TestFunction::ExpTerm> terms;
    for (std::size_t n = 0; n < cubes.size(); ++n) {
        if (!fx.mc.U.intersects(cubes[n])) continue;
        for (int mem = 0; mem < fx.fam.size(); ++mem)
            terms.push_back({cubes[n], mem, rng.cnormal()});
    }
    auto f = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, terms);

    const Point v(1, 0.0);
    auto a = lattice_coeffs(f, fx.mc, v);
    auto mco = decompose(a, fx.mc);

    // M_psi Q f as an expansion.
    auto m_qf = multiplier_M_psi(a, fx.mc.psi);
    std::vector<TestFunction::ExpTerm> tq;
    for (std::size_t n = 0; n < m_qf.cubes.size(); ++n)
        for (int mem = 0; mem < m_qf.members; ++mem)
            tq.push_back({m_qf.cubes[n], mem, m_qf.at(n, mem)});
    auto lhs = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, tq);

    // sum over a subsample of points of |sum_m <a,phi^m> g_m - M_psi Q f|.
    for (int t = 0; t < 100; ++t) {
        const Point x = {rng.uniform(-0.2, 0.2)};
        cd rhs = 0.0;
        for (std::int64_t mi = 0; mi < lat.size(); ++mi) {
            const auto kp = lat.index_to_k(mi);
            for (int mem = 0; mem < fx.fam.size(); ++mem) {
                if (mco.at(mi, mem) == cd{}) continue;
                auto gm = build_g_m(fx.mc, kp, mem, Point(1, 0.0));
                rhs += mco.at(mi, mem) * gm.eval(x);
            }
        }
        CHECK(std::abs(rhs - lhs.eval(x)) < 1e-6 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("g_m basics") {
    ModFixture fx(1, 1, 3);
    const Lattice lat = fx.mc.lattice();
    // m = 0, psi weights: g_0 = amp * sum psi(c_J) h_J.
    auto g0 = build_g_m(fx.mc, {0}, 0, Point(1, 0.0));
    const double amp = fx.mc.phi_amp();
    for (const auto& t : g0.terms) {
        const double w = fx.mc.psi.eval(t.cube.center);
        CHECK(std::abs(t.coeff - cd(amp * w, 0.0)) < 1e-14);
    }
    // Outside all halos the function vanishes.
    CHECK(std::abs(g0.eval({0.9})) == 0.0);

    // ||g_m||_2^2 ~ sum psi^2 / Mpts within O(eta).
    QuadratureSpec quad;
    double want = 0.0;
    for (const auto& Q : lattice_cubes(lat, Point(1, 0.0))) {
        const double w = fx.mc.psi.eval(Q.center);
        want += w * w * amp * amp;
    }
    auto gm = build_g_m(fx.mc, {3}, 0, Point(1, 0.0));
    double got = 0.0;
    for (const auto& t1 : gm.terms)
        for (const auto& t2 : gm.terms) {
            auto w1 = smooth_wavelet(fx.fam, t1.member, t1.cube, fx.mc.eta, fx.mol);
            auto w2 = smooth_wavelet(fx.fam, t2.member, t2.cube, fx.mc.eta, fx.mol);
            if (!w1.support().intersects(w2.support())) continue;
            got += (t1.coeff * std::conj(t2.coeff)).real() * inner_product(w1, w2, quad);
        }
    CHECK(std::abs(got - want) < 20 * fx.mc.eta * want);
}

TEST_CASE("A_m periodicity in the grid shift") {
    ModFixture fx(1, 2, 3);
    Rng rng(55);
    const auto cubes = lattice_cubes(fx.mc.lattice(), Point(1, 0.0));
    std::vector<TestFunction::ExpTerm> terms;
    for (std::size_t n = 0; n < cubes.size(); ++n) {
        if (!fx.mc.U.intersects(cubes[n])) continue;
        terms.push_back({cubes[n], 0, rng.cnormal()});
    }
    auto f = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, terms);

    const double h = std::ldexp(1.0, -fx.mc.s);
    for (int trial = 0; trial < 20; ++trial) {
        const Point v = {rng.uniform(0.0, h)};
        const std::vector<std::int64_t> kp = {
            static_cast<std::int64_t>(rng.bits() % 17) - 8};
        const double nstep = (trial % 2 ? 1.0 : -1.0) * h;
        auto a1 = channel_A(f, fx.mc, v, kp);
        auto a2 = channel_A(f, fx.mc, {v[0] + nstep}, kp);
        // The paper's phase e^{-2 pi i 2^{2s} n . m} equals 1 on the lattice.
        for (std::size_t mem = 0; mem < a1.size(); ++mem)
            CHECK(std::abs(a1[mem] - a2[mem]) < 1e-6 * (1.0 + std::abs(a1[mem])));
    }

    // f = 0 -> A_m = 0.
    auto z = TestFunction::expansion(fx.fam, fx.mol, fx.mc.eta, {});
    z.support = Cube(1, {0.0}, 1.0);
    auto az = channel_A(z, fx.mc, {0.01}, {3});
    for (const auto& v : az) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("periodic interpolant reproduces smooth periodic functions") {
    const double P = 0.125;
    auto F = [&](const Point& y) {
        return std::vector<cd>{
            std::polar(1.0, 2.0 * M_PI * 3.0 * y[0] / P) + cd(0.4, 0.0),
            cd(std::cos(2.0 * M_PI * y[0] / P), std::sin(4.0 * M_PI * y[0] / P))};
    };
    PeriodicInterpolant interp(1, P, 33, F, 2);
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const Point y = {rng.uniform(-3.0, 3.0)};
        Point yr = {y[0] - P * std::floor(y[0] / P)};
        auto want = F(yr);
        auto got = interp.eval(yr);
        CHECK(std::abs(got[0] - want[0]) < 1e-11);
        CHECK(std::abs(got[1] - want[1]) < 1e-11);
    }
    CHECK(std::abs(interp.fourier(0, {3}) - 1.0) < 1e-12);
    CHECK(std::abs(interp.fourier(0, {0}) - 0.4) < 1e-12);
    CHECK(std::abs(interp.fourier(0, {1})) < 1e-12);
}
