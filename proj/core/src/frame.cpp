#include "extlab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "extlab/errors.hpp"
#include "extlab/parallel.hpp"

namespace extlab {

double CoeffSeq::lq_norm(double q) const {
    double s = 0.0;
    for (const auto& v : values) s += std::pow(std::abs(v), q);
    return std::pow(s, 1.0 / q);
}

std::string CoeffSeq::to_csv() const {
    std::string out;
    const int dim = cubes.empty() ? 0 : cubes[0].dim;
    for (int i = 0; i < dim; ++i) {
        out += "center" + std::to_string(i) + ",";
    }
    out += "member,re,im\n";
    char buf[96];
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        for (int m = 0; m < members; ++m) {
            std::string row;
            for (int i = 0; i < dim; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,", cubes[c].center[i]);
                row += buf;
            }
            const cd v = at(c, m);
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", m, v.real(), v.imag());
            row += buf;
            out += row;
        }
    }
    return out;
}

cd TestFunction::eval(const Point& x) const {
    if (!is_expansion) return fn(x);
    cd s = 0.0;
    for (const auto& t : terms) {
        SmoothWavelet w = smooth_wavelet(*family, t.member, t.cube, eta, *moll);
        s += t.coeff * w.eval(x);
    }
    return s;
}

TestFunction TestFunction::callable(std::function<cd(const Point&)> f, Cube support) {
    TestFunction t;
    t.is_expansion = false;
    t.fn = std::move(f);
    t.support = std::move(support);
    return t;
}

TestFunction TestFunction::expansion(const AlpertFamily& fam, const Mollifier& moll,
                                     double eta, std::vector<ExpTerm> terms) {
    TestFunction t;
    t.is_expansion = true;
    t.family = &fam;
    t.moll = &moll;
    t.eta = eta;
    t.terms = std::move(terms);
    // Bounding box of the expansion supports.
    if (!t.terms.empty()) {
        const int dim = t.terms[0].cube.dim;
        Point lo(dim, 1e300), hi(dim, -1e300);
        for (const auto& e : t.terms) {
            const Cube s = e.cube.dilated(1.0 + 2.0 * eta);
            for (int i = 0; i < dim; ++i) {
                lo[i] = std::min(lo[i], s.lo(i));
                hi[i] = std::max(hi[i], s.hi(i));
            }
        }
        double side = 0;
        Point c(dim);
        for (int i = 0; i < dim; ++i) {
            side = std::max(side, hi[i] - lo[i]);
            c[i] = 0.5 * (lo[i] + hi[i]);
        }
        t.support = Cube(dim, c, side + 1e-12);
    }
    return t;
}

namespace {

// Memoized wavelet-wavelet inner products keyed by the relative geometry
// (scale pair, members, offset); translation invariance makes same-grid
// Grams a handful of distinct values.
struct PairKey {
    const void* famA;
    const void* famB;
    std::int64_t etaA, etaB;
    std::int64_t ratio;  // quantized sideB/sideA
    std::int64_t off[3];
    int memA, memB;
    int smoothA, smoothB;
    bool operator==(const PairKey& o) const {
        return famA == o.famA && famB == o.famB && etaA == o.etaA && etaB == o.etaB &&
               ratio == o.ratio && memA == o.memA && memB == o.memB &&
               smoothA == o.smoothA && smoothB == o.smoothB && off[0] == o.off[0] &&
               off[1] == o.off[1] && off[2] == o.off[2];
    }
};
struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
        std::size_t h = std::hash<std::int64_t>()(k.ratio);
        auto mix = [&h](std::size_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(std::hash<const void*>()(k.famA));
        mix(std::hash<const void*>()(k.famB));
        mix(std::hash<std::int64_t>()(k.etaA * 31 + k.etaB));
        for (int i = 0; i < 3; ++i) mix(std::hash<std::int64_t>()(k.off[i]));
        mix(std::hash<int>()(((k.memA * 1024 + k.memB) * 4 + k.smoothA) * 2 + k.smoothB));
        return h;
    }
};

class PairCache {
public:
    double get(const SmoothWavelet& a, const SmoothWavelet& b,
               const QuadratureSpec& quad) {
        PairKey k{};
        k.famA = a.family;
        k.famB = b.family;
        k.etaA = llround(a.eta * 1e12);
        k.etaB = llround(b.eta * 1e12);
        k.smoothA = a.smooth ? 1 : 0;
        k.smoothB = b.smooth ? 1 : 0;
        k.ratio = llround(b.Q.side / a.Q.side * 1e12);
        for (int i = 0; i < 3; ++i) k.off[i] = 0;
        for (int i = 0; i < a.Q.dim; ++i)
            k.off[i] = llround((b.Q.center[i] - a.Q.center[i]) / a.Q.side * 1e12);
        k.memA = a.member;
        k.memB = b.member;
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = cache_.find(k);
            if (it != cache_.end()) return it->second;
        }
        const double v = inner_product(a, b, quad);
        std::lock_guard<std::mutex> lock(mtx_);
        cache_.emplace(k, v);
        return v;
    }

private:
    std::mutex mtx_;
    std::unordered_map<PairKey, double, PairKeyHash> cache_;
};

PairCache& pair_cache() {
    static PairCache c;
    return c;
}

} // namespace

FrameState::FrameState(const FrameConfig& cfg) : cfg_(cfg) {
    if (!cfg_.family || !cfg_.moll) throw ConfigError("FrameState: family/mollifier unset");
    std::vector<Cube> all;
    for (int s = cfg_.s_min; s <= cfg_.s_max; ++s) {
        auto cs = cubes_at_scale(cfg_.grid, s, cfg_.region);
        all.insert(all.end(), cs.begin(), cs.end());
    }
    build(std::move(all));
}

FrameState::FrameState(const FrameConfig& cfg, std::vector<Cube> single_scale_cubes)
    : cfg_(cfg) {
    if (!cfg_.family || !cfg_.moll) throw ConfigError("FrameState: family/mollifier unset");
    build(std::move(single_scale_cubes));
}

void FrameState::build(std::vector<Cube> cubes) {
    cubes_ = std::move(cubes);
    const int mem = cfg_.family->size();
    flat_.reserve(cubes_.size() * mem);
    for (std::size_t c = 0; c < cubes_.size(); ++c)
        for (int m = 0; m < mem; ++m) flat_.emplace_back(static_cast<int>(c), m);
}

int FrameState::members() const { return cfg_.family->size(); }

SmoothWavelet FrameState::wavelet(int flat) const {
    const auto [c, m] = flat_[flat];
    return smooth_wavelet(*cfg_.family, m, cubes_[c], cfg_.eta, *cfg_.moll);
}

int FrameState::flat_index(std::size_t cube, int member) const {
    return static_cast<int>(cube) * members() + member;
}

std::vector<cd> FrameState::analyze(const TestFunction& f) const {
    const int n = n_wavelets();
    auto vals = parallel_map<cd>(n, [&](std::size_t i) -> cd {
        const SmoothWavelet w = wavelet(static_cast<int>(i));
        if (f.is_expansion) {
            cd s = 0.0;
            for (const auto& t : f.terms) {
                SmoothWavelet wf = smooth_wavelet(*f.family, t.member, t.cube, f.eta,
                                                  *f.moll);
                if (!wf.support().intersects(w.support())) continue;
                s += t.coeff * pair_cache().get(w, wf, cfg_.quad);
            }
            return s;
        }
        return inner_product_fn(f.fn, f.support, w, cfg_.quad);
    });
    return vals;
}

const std::vector<double>& FrameState::gram() const {
    std::call_once(gram_once_, [this] {
        const int n = n_wavelets();
        gram_.assign(static_cast<std::size_t>(n) * n, 0.0);
        auto rows = parallel_map<int>(n, [&](std::size_t i) {
            const SmoothWavelet wi = wavelet(static_cast<int>(i));
            for (int j = static_cast<int>(i); j < n; ++j) {
                const SmoothWavelet wj = wavelet(j);
                if (!wi.support().intersects(wj.support())) continue;
                const double v = pair_cache().get(wi, wj, cfg_.quad);
                gram_[i * n + j] = v;
                gram_[j * n + static_cast<int>(i)] = v;
            }
            return 0;
        });
        (void)rows;
    });
    return gram_;
}

std::vector<cd> FrameState::neumann_solve(const std::vector<cd>& b,
                                          NeumannInfo* info) const {
    const int n = n_wavelets();
    const auto& G = gram();
    double bnorm = 0.0;
    for (const auto& v : b) bnorm += std::norm(v);
    bnorm = std::sqrt(bnorm);
    std::vector<cd> c(b), inc(b);
    double prev = bnorm;
    int terms = 0;
    double ratio = 0.0, inorm = bnorm;
    for (terms = 1; terms <= cfg_.neumann_max_terms; ++terms) {
        // inc <- (I - G) inc
        std::vector<cd> next(n, cd{});
        for (int i = 0; i < n; ++i) {
            cd s = inc[i];
            const double* row = &G[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) s -= row[j] * inc[j];
            next[i] = s;
        }
        inc = std::move(next);
        inorm = 0.0;
        for (const auto& v : inc) inorm += std::norm(v);
        inorm = std::sqrt(inorm);
        ratio = prev > 0 ? inorm / prev : 0.0;
        prev = inorm;
        for (int i = 0; i < n; ++i) c[i] += inc[i];
        if (inorm <= cfg_.neumann_tol * std::max(bnorm, 1e-300)) break;
        if (terms == cfg_.neumann_max_terms)
            throw ConvergenceError("neumann_solve: no contraction within budget", ratio,
                                   terms);
    }
    if (info) {
        info->terms = terms;
        info->last_ratio = ratio;
        info->last_increment = inorm;
    }
    return c;
}

cd FrameState::synth(const std::vector<cd>& c, const Point& x) const {
    cd s = 0.0;
    for (int i = 0; i < n_wavelets(); ++i) {
        if (c[i] == cd{}) continue;
        const auto [ci, m] = flat_[i];
        const Cube& Q = cubes_[ci];
        bool inside = true;
        const double halo = 0.5 * Q.side * (1.0 + 2.0 * cfg_.eta);
        for (int d = 0; d < Q.dim; ++d) {
            if (std::abs(x[d] - Q.center[d]) > halo) {
                inside = false;
                break;
            }
        }
        if (!inside) continue;
        s += c[i] * wavelet(i).eval(x);
    }
    return s;
}

double FrameState::expansion_l2(const std::vector<cd>& c) const {
    const auto& G = gram();
    const int n = n_wavelets();
    cd q = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            q += std::conj(c[i]) * G[static_cast<std::size_t>(i) * n + j] * c[j];
    return std::sqrt(std::max(0.0, q.real()));
}

cd apply_T(const TestFunction& f, const Point& x, const FrameState& state) {
    return state.synth(state.analyze(f), x);
}

namespace {

// Match the expansion of f against the state's wavelets; empty when any term
// is not an active wavelet.
std::vector<cd> match_expansion(const TestFunction& f, const FrameState& st) {
    if (!f.is_expansion) return {};
    if (f.family != st.config().family || f.moll != st.config().moll ||
        std::abs(f.eta - st.config().eta) > 1e-15)
        return {};
    std::vector<cd> a(st.n_wavelets(), cd{});
    for (const auto& t : f.terms) {
        bool found = false;
        for (std::size_t c = 0; c < st.cubes().size() && !found; ++c) {
            const Cube& Q = st.cubes()[c];
            if (std::abs(Q.side - t.cube.side) > 1e-14 * Q.side) continue;
            bool same = true;
            for (int i = 0; i < Q.dim; ++i)
                if (std::abs(Q.center[i] - t.cube.center[i]) > 1e-12) same = false;
            if (same) {
                a[st.flat_index(c, t.member)] += t.coeff;
                found = true;
            }
        }
        if (!found) return {};
    }
    return a;
}

} // namespace

cd apply_T_inverse(const TestFunction& f, const Point& x, const FrameState& state,
                   NeumannInfo* info) {
    const auto& cfg = state.config();
    const int n = state.n_wavelets();
    const auto& G = state.gram();
    auto gmul = [&](const std::vector<cd>& v) {
        std::vector<cd> out(n, cd{});
        for (int i = 0; i < n; ++i) {
            cd s = 0.0;
            const double* row = &G[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) s += row[j] * v[j];
            out[i] = s;
        }
        return out;
    };

    auto a = match_expansion(f, state);
    if (!a.empty()) {
        // (I-T)^k f stays in the expansion span: coefficients (I-G)^k a.
        std::vector<cd> inc = a, sum = a;
        const double fnorm = state.expansion_l2(a);
        double prev = fnorm, ratio = 0.0, inorm = fnorm;
        int terms;
        for (terms = 1; terms <= cfg.neumann_max_terms; ++terms) {
            auto g = gmul(inc);
            for (int i = 0; i < n; ++i) inc[i] -= g[i];
            inorm = state.expansion_l2(inc);
            ratio = prev > 0 ? inorm / prev : 0.0;
            prev = inorm;
            for (int i = 0; i < n; ++i) sum[i] += inc[i];
            if (inorm <= cfg.neumann_tol * std::max(fnorm, 1e-300)) break;
            if (terms == cfg.neumann_max_terms)
                throw ConvergenceError("apply_T_inverse: Neumann stalled", ratio, terms);
        }
        if (info) {
            info->terms = terms;
            info->last_ratio = ratio;
            info->last_increment = inorm;
        }
        return state.synth(sum, x);
    }

    // Generic route: the n-th Neumann term is f - w_n . h with
    // w_{n+1} = w_n + (b - G w_n).  The coefficient increments contract like
    // I - G; the part of f outside the truncated span shows up as a residual
    // plateau, detected by sampling f - w . h.
    const auto b = state.analyze(f);
    double bnorm = 0.0;
    for (const auto& v : b) bnorm += std::norm(v);
    bnorm = std::sqrt(bnorm);
    std::vector<cd> w(n, cd{}), wsum(n, cd{});
    double prev = 1e300, ratio = 0.0, dnorm = 0.0;
    int terms = 0;
    for (terms = 1; terms <= cfg.neumann_max_terms; ++terms) {
        auto g = gmul(w);
        dnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            const cd delta = b[i] - g[i];
            w[i] += delta;
            dnorm += std::norm(delta);
        }
        dnorm = std::sqrt(dnorm);
        ratio = prev < 1e300 && prev > 0 ? dnorm / prev : 0.0;
        prev = dnorm;
        for (int i = 0; i < n; ++i) wsum[i] += w[i];
        if (dnorm <= cfg.neumann_tol * std::max(bnorm, 1e-300)) break;
        if (terms == cfg.neumann_max_terms)
            throw ConvergenceError("apply_T_inverse: coefficient increments "
                                   "not contracting",
                                   ratio, terms);
    }
    // Residual plateau check: sample |f - w . h| against |f|.
    {
        const int dim = f.support.dim;
        const int nper = dim == 1 ? 257 : 33;
        double rmax = 0.0, fmax = 0.0;
        Point xx(dim, 0.0);
        std::vector<int> idx(dim, 0);
        while (true) {
            for (int ax = 0; ax < dim; ++ax)
                xx[ax] = f.support.lo(ax) +
                         f.support.side * (idx[ax] + 0.5) / nper;
            const cd fv = f.eval(xx);
            rmax = std::max(rmax, std::abs(fv - state.synth(w, xx)));
            fmax = std::max(fmax, std::abs(fv));
            int ax = 0;
            while (ax < dim) {
                if (++idx[ax] < nper) break;
                idx[ax] = 0;
                ++ax;
            }
            if (ax == dim) break;
        }
        if (rmax > 0.5 * fmax && fmax > 0.0)
            throw ConvergenceError(
                "apply_T_inverse: f lies outside the truncated span "
                "(Neumann terms do not decay)",
                1.0, terms);
    }
    if (info) {
        info->terms = terms;
        info->last_ratio = ratio;
        info->last_increment = dnorm;
    }
    const double mf = static_cast<double>(terms) + 1.0;
    return mf * f.eval(x) - state.synth(wsum, x);
}

CoeffSeq pseudoprojection_Q(const TestFunction& f, const FrameState& state,
                            NeumannInfo* info) {
    const auto b = state.analyze(f);
    const auto c = state.neumann_solve(b, info);
    CoeffSeq seq;
    seq.members = state.members();
    seq.cubes = state.cubes();
    seq.s = static_cast<int>(std::lround(-std::log2(
        state.cubes().empty() ? 1.0 : state.cubes()[0].side)));
    seq.values = c;
    return seq;
}

std::vector<NormScalingRow> norm_scaling(const TestFunction& f, double q, int s_lo,
                                         int s_hi, const FrameConfig& base_cfg) {
    if (!(q > 1.0)) throw ConfigError("norm_scaling: need q in (1, inf)");
    std::vector<NormScalingRow> rows;
    for (int s = s_lo; s <= s_hi; ++s) {
        FrameConfig cfg = base_cfg;
        cfg.s_min = cfg.s_max = s;
        FrameState state(cfg);
        const auto c = state.neumann_solve(state.analyze(f), nullptr);

        double coeff_lq = 0.0;
        for (const auto& v : c) coeff_lq += std::pow(std::abs(v), q);
        coeff_lq = std::pow(coeff_lq, 1.0 / q);
        if (coeff_lq < 1e-300) throw Error("norm_scaling: degenerate coefficient norm");

        // L^q norm of the synthesized projection over the active region.
        const int dim = cfg.region.dim;
        std::vector<std::vector<double>> bps(dim);
        Point lo(dim, 1e300), hi(dim, -1e300);
        for (std::size_t ci = 0; ci < state.cubes().size(); ++ci) {
            SmoothWavelet w = state.wavelet(state.flat_index(ci, 0));
            for (int ax = 0; ax < dim; ++ax) {
                auto v = w.axis_breakpoints(ax);
                bps[ax].insert(bps[ax].end(), v.begin(), v.end());
                lo[ax] = std::min(lo[ax], w.support().lo(ax));
                hi[ax] = std::max(hi[ax], w.support().hi(ax));
            }
        }
        if (dim != 1)
            throw ConfigError("norm_scaling: desk-scale implementation is 1-D");
        std::sort(bps[0].begin(), bps[0].end());
        auto integrand = [&](double x) {
            return std::pow(std::abs(state.synth(c, {x})), q);
        };
        const double nq =
            std::pow(integrate_cells(integrand, lo[0], hi[0], bps[0], 8), 1.0 / q);

        NormScalingRow row;
        row.s = s;
        row.lq_norm = nq;
        row.coeff_lq = coeff_lq;
        const double scale = std::pow(2.0, s * dim * (0.5 - 1.0 / q));
        row.ratio = nq / (scale * coeff_lq);
        rows.push_back(row);
    }
    return rows;
}

LambdaSmoothness lambda_smoothness(const TestFunction& f, const Cube& base_cube,
                                   int member, const std::vector<int>& alpha,
                                   double step, const FrameConfig& cfg,
                                   const std::vector<Point>& v_samples) {
    const int dim = cfg.grid.dim;
    int order = 0, axis = 0;
    for (int i = 0; i < dim; ++i) {
        if (alpha[i] > 0) {
            order += alpha[i];
            axis = i;
        }
    }
    if (order > 2) throw ConfigError("lambda_smoothness: orders 0..2 supported");
    const int s = static_cast<int>(std::lround(-std::log2(base_cube.side)));
    if (step >= base_cube.side)
        throw ConfigError("lambda_smoothness: step must be << 2^{-s}");

    auto lambda_at = [&](const Point& v) -> cd {
        FrameConfig c2 = cfg;
        c2.grid = Grid(dim, v);
        FrameState st(c2);
        const auto c = st.neumann_solve(st.analyze(f), nullptr);
        // locate the moved cube J' + v
        for (std::size_t ci = 0; ci < st.cubes().size(); ++ci) {
            bool same = true;
            for (int i = 0; i < dim; ++i)
                if (std::abs(st.cubes()[ci].center[i] - (base_cube.center[i] + v[i])) >
                    1e-9 * base_cube.side)
                    same = false;
            if (same) return c[st.flat_index(ci, member)];
        }
        throw Error("lambda_smoothness: base cube not present in shifted grid");
    };

    auto fd = [&](const Point& v, double h) -> double {
        if (order == 0) return std::abs(lambda_at(v));
        Point vp = v, vm = v;
        vp[axis] += h;
        vm[axis] -= h;
        if (order == 1) return std::abs(lambda_at(vp) - lambda_at(vm)) / (2.0 * h);
        return std::abs(lambda_at(vp) - 2.0 * lambda_at(v) + lambda_at(vm)) / (h * h);
    };

    double maxd = 0.0;
    for (const auto& v : v_samples) {
        const double d1 = fd(v, step);
        if (order > 0) {
            const double d2 = fd(v, 2.0 * step);
            if (std::abs(d1 - d2) > 0.5 * std::max({std::abs(d1), std::abs(d2), 1e-12}))
                throw Error("lambda_smoothness: step-halving instability (noise floor)");
        }
        maxd = std::max(maxd, d1);
    }
    LambdaSmoothness out;
    out.max_derivative = maxd;
    double fnorm = 1.0;
    if (f.is_expansion) {
        double s2 = 0.0;
        for (const auto& t : f.terms) s2 += std::norm(t.coeff);
        fnorm = std::sqrt(s2);
    }
    out.ratio_to_scale = maxd / (std::pow(2.0, order * s) * std::max(fnorm, 1e-300));
    return out;
}

} // namespace extlab
