#include <doctest.h>

#include <cmath>
#include <memory>

#include "extlab/errors.hpp"
#include "extlab/fit.hpp"
#include "extlab/frame.hpp"
#include "extlab/rng.hpp"

using namespace extlab;

namespace {

struct Fixture {
    AlpertFamily fam;
    Mollifier mol;
    FrameConfig cfg;

    Fixture(int dim, int kappa, int s, double eta = 1.0 / 64.0, double region_side = 1.0) {
        fam = build_alpert_family(dim, kappa);
        mol = build_mollifier(dim, kappa + 1, kappa + 3);
        cfg.grid = Grid::standard(dim);
        cfg.family = &fam;
        cfg.moll = &mol;
        cfg.eta = eta;
        cfg.s_min = cfg.s_max = s;
        cfg.region = Cube(dim, Point(dim, 0.0), region_side);
    }

    TestFunction random_expansion(const FrameState& st, std::uint64_t seed) const {
        Rng rng(seed);
        std::vector<TestFunction::ExpTerm> terms;
        for (std::size_t c = 0; c < st.cubes().size(); ++c)
            for (int m = 0; m < st.members(); ++m)
                terms.push_back({st.cubes()[c], m, rng.cnormal()});
        return TestFunction::expansion(fam, mol, cfg.eta, std::move(terms));
    }
};

} // namespace

TEST_CASE("biorthogonality identity: <T^-1 h_I, h_J> = delta") {
    Fixture fx(1, 2, 3);
    FrameState st(fx.cfg);
    const int n = st.n_wavelets();
    REQUIRE(n == 2 * 8);
    for (int i = 0; i < n; i += 3) {
        // f = h_i as an expansion
        const auto [ci, mi] = std::pair<int, int>(i / st.members(), i % st.members());
        auto f = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta,
                                         {{st.cubes()[ci], mi, 1.0}});
        auto c = st.neumann_solve(st.analyze(f), nullptr);
        for (int j = 0; j < n; ++j) {
            const double want = (j == i) ? 1.0 : 0.0;
            CHECK(std::abs(c[j] - want) < 1e-7);
        }
    }
}

TEST_CASE("apply_T on orthogonal input is zero") {
    Fixture fx(1, 2, 3);
    FrameState st(fx.cfg);
    // f supported away from the active region.
    auto f = TestFunction::callable(
        [](const Point& x) { return cd(std::sin(3 * x[0]), 0.0); }, Cube(1, {10.0}, 1.0));
    CHECK(std::abs(apply_T(f, {0.1}, st)) < 1e-12);
}

TEST_CASE("apply_T reproduces dominant wavelet") {
    Fixture fx(1, 2, 4);
    FrameState st(fx.cfg);
    auto f = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta,
                                     {{st.cubes()[3], 0, 1.0}});
    // T f = sum_J <h_I0, h_J> h_J ~ h_I0 (near-orthonormality).
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        Point x = {rng.uniform(-0.5, 0.5)};
        const cd tf = apply_T(f, x, st);
        const cd hv = f.eval(x);
        CHECK(std::abs(tf - hv) < 20 * fx.cfg.eta * (1.0 + std::abs(hv)));
    }
}

TEST_CASE("neumann contraction ratio scales like eta") {
    // ||(I-T)g||/||g|| = O(eta): log-log slope in eta >= 0.8.
    std::vector<double> etas{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::vector<double> ratios;
    for (double eta : etas) {
        Fixture fx(1, 2, 3, eta);
        FrameState st(fx.cfg);
        auto f = fx.random_expansion(st, 99);
        auto a = st.analyze(f);  // ~ G a0 but fine as probe
        // one application of (I-G)
        const auto& G = st.gram();
        const int n = st.n_wavelets();
        std::vector<cd> inc(n);
        for (int i = 0; i < n; ++i) {
            cd s = a[i];
            for (int j = 0; j < n; ++j) s -= G[i * n + j] * a[j];
            inc[i] = s;
        }
        CHECK(st.expansion_l2(a) > 0);
        ratios.push_back(st.expansion_l2(inc) / st.expansion_l2(a));
    }
    auto fit = loglog_fit(etas, ratios, false);
    CHECK(fit.slope >= 0.8);
}

TEST_CASE("T^-1 then T is the identity on the span") {
    Fixture fx(1, 2, 3);
    FrameState st(fx.cfg);
    auto f = fx.random_expansion(st, 31);
    // T^-1 f as a function: coefficients G^-1 a where a are f's own
    // expansion coefficients.
    std::vector<cd> a(st.n_wavelets());
    for (std::size_t t = 0; t < f.terms.size(); ++t) a[t] = f.terms[t].coeff;
    NeumannInfo info;
    auto cinv = st.neumann_solve(a, &info);
    CHECK(info.terms < 50);
    CHECK(info.last_ratio < 0.5);
    TestFunction tinv = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta, {});
    for (std::size_t ci = 0; ci < st.cubes().size(); ++ci)
        for (int m = 0; m < st.members(); ++m)
            tinv.terms.push_back({st.cubes()[ci], m, cinv[st.flat_index(ci, m)]});
    Rng rng(7);
    double num = 0.0, den = 0.0;
    for (int t = 0; t < 40; ++t) {
        Point x = {rng.uniform(-0.5, 0.5)};
        const cd tv = apply_T(tinv, x, st);  // T(T^-1 f)(x)
        const cd fv = f.eval(x);
        num = std::max(num, std::abs(tv - fv));
        den = std::max(den, std::abs(fv));
    }
    CHECK(num < 1e-5 * (1.0 + den));
}

TEST_CASE("apply_T_inverse matrix route matches generic route") {
    Fixture fx(1, 2, 3);
    FrameState st(fx.cfg);
    auto f = fx.random_expansion(st, 5);
    // Generic route: wrap the expansion in a callable so matching fails.
    auto g = TestFunction::callable([&](const Point& x) { return f.eval(x); },
                                    f.support);
    for (double x : {-0.31, 0.02, 0.27}) {
        const cd v1 = apply_T_inverse(f, {x}, st);
        const cd v2 = apply_T_inverse(g, {x}, st);
        CHECK(std::abs(v1 - v2) < 2e-4 * (1.0 + std::abs(v1)));
    }
}

TEST_CASE("pseudoprojection idempotence and unit vectors") {
    Fixture fx(1, 2, 3);
    FrameState st(fx.cfg);

    // f = h_{J0} in the active set -> unit coefficient vector.
    auto f0 = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta,
                                      {{st.cubes()[2], 1, 1.0}});
    auto seq = pseudoprojection_Q(f0, st);
    for (std::size_t c = 0; c < seq.cubes.size(); ++c)
        for (int m = 0; m < seq.members; ++m) {
            const double want = (c == 2 && m == 1) ? 1.0 : 0.0;
            CHECK(std::abs(seq.at(c, m) - want) < 1e-7);
        }

    // f supported outside the halo of the region -> all coefficients ~ 0.
    auto fout = TestFunction::callable(
        [](const Point& x) { return cd(1.0 + x[0], 0.0); }, Cube(1, {5.0}, 1.0));
    auto seq2 = pseudoprojection_Q(fout, st);
    for (const auto& v : seq2.values) CHECK(std::abs(v) < 1e-12);

    // f = 1 on the region: Q^2 f = Q f.
    auto one = TestFunction::callable([](const Point&) { return cd(1.0, 0.0); },
                                      Cube(1, {0.0}, 1.0));
    auto q1 = pseudoprojection_Q(one, st);
    TestFunction qf = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta, {});
    for (std::size_t c = 0; c < q1.cubes.size(); ++c)
        for (int m = 0; m < q1.members; ++m)
            qf.terms.push_back({q1.cubes[c], m, q1.at(c, m)});
    auto q2 = pseudoprojection_Q(qf, st);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < q1.values.size(); ++i) {
        diff = std::max(diff, std::abs(q1.values[i] - q2.values[i]));
        scale = std::max(scale, std::abs(q1.values[i]));
    }
    CHECK(diff < 1e-6 * (1.0 + scale));
}

TEST_CASE("idempotence on random f") {
    Fixture fx(1, 2, 4);
    FrameState st(fx.cfg);
    Rng rng(123);
    auto f = TestFunction::callable(
        [&](const Point& x) {
            return cd(std::sin(7.0 * x[0]) + 0.3 * x[0] * x[0], std::cos(3.0 * x[0]));
        },
        Cube(1, {0.0}, 1.0));
    auto q1 = pseudoprojection_Q(f, st);
    TestFunction qf = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta, {});
    for (std::size_t c = 0; c < q1.cubes.size(); ++c)
        for (int m = 0; m < q1.members; ++m)
            qf.terms.push_back({q1.cubes[c], m, q1.at(c, m)});
    auto q2 = pseudoprojection_Q(qf, st);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q1.values.size(); ++i) {
        num += std::norm(q1.values[i] - q2.values[i]);
        den += std::norm(q1.values[i]);
    }
    CHECK(std::sqrt(num) < 1e-5 * std::sqrt(den));
}

TEST_CASE("norm scaling ratios stay within x1.5 and q=2 is flat") {
    Fixture fx(1, 2, 3, 1.0 / 64.0, 0.25);
    // Random coefficients drawn per scale inside U = [-1/8, 1/8).
    Rng rng(77);
    for (double q : {2.0, 8.0 / 3.0, 4.0}) {
        std::vector<double> ratios;
        for (int s = 3; s <= 6; ++s) {
            FrameConfig cfg = fx.cfg;
            cfg.s_min = cfg.s_max = s;
            FrameState st(cfg);
            std::vector<TestFunction::ExpTerm> terms;
            for (std::size_t c = 0; c < st.cubes().size(); ++c)
                for (int m = 0; m < st.members(); ++m)
                    terms.push_back({st.cubes()[c], m, rng.cnormal()});
            auto f = TestFunction::expansion(fx.fam, fx.mol, cfg.eta, std::move(terms));
            auto rows = norm_scaling(f, q, s, s, cfg);
            REQUIRE(rows.size() == 1);
            ratios.push_back(rows[0].ratio);
        }
        double lo = 1e300, hi = 0;
        for (double r : ratios) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo < 1.5);
        if (q == 2.0) {
            for (double r : ratios) CHECK(std::abs(r - 1.0) < 10 * fx.cfg.eta);
        }
    }
}

TEST_CASE("lambda smoothness orders 0 and 1") {
    Fixture fx(1, 2, 3, 1.0 / 64.0, 0.5);
    FrameState st(fx.cfg);
    auto f = fx.random_expansion(st, 17);

    Cube base(1, {0.0625}, 0.125);  // a standard-grid cube at scale 3
    std::vector<Point> vs = {{0.01}, {0.05}, {0.09}};
    auto l0 = lambda_smoothness(f, base, 0, {0}, 1e-3, fx.cfg, vs);
    CHECK(l0.max_derivative > 0.0);
    CHECK(l0.ratio_to_scale < 10.0);

    auto l1 = lambda_smoothness(f, base, 0, {1}, 1e-4, fx.cfg, vs);
    CHECK(l1.max_derivative > 0.0);

    // f = 0 -> 0.
    auto z = TestFunction::expansion(fx.fam, fx.mol, fx.cfg.eta, {});
    z.support = Cube(1, {0.0}, 1.0);
    auto lz = lambda_smoothness(z, base, 0, {0}, 1e-3, fx.cfg, vs);
    CHECK(lz.max_derivative == 0.0);
}

TEST_CASE("coeffseq csv") {
    CoeffSeq seq;
    seq.s = 2;
    seq.cubes = {Cube(1, {0.125}, 0.25)};
    seq.members = 2;
    seq.values = {cd(1.5, -2.25), cd(0.0, 1.0)};
    const auto csv = seq.to_csv();
    CHECK(csv.find("center0,member,re,im") == 0);
    CHECK(csv.find("0.125,0,1.5,-2.25") != std::string::npos);
}
