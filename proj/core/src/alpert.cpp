#include "extlab/alpert.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "extlab/errors.hpp"

namespace extlab {

std::vector<std::vector<int>> monomials_up_to(int dim, int deg) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(dim, 0);
    // Graded order: enumerate by total degree, lexicographic within a grade.
    for (int total = 0; total <= deg; ++total) {
        std::function<void(int, int)> rec = [&](int axis, int remaining) {
            if (axis == dim - 1) {
                cur[axis] = remaining;
                out.push_back(cur);
                return;
            }
            for (int e = remaining; e >= 0; --e) {
                cur[axis] = e;
                rec(axis + 1, remaining - e);
            }
        };
        rec(0, total);
    }
    return out;
}

double PiecewisePolynomial::eval_unit(const Point& u) const {
    const int c = child_of(u);
    if (c < 0) return 0.0;
    return pieces[c].eval(u);
}

int PiecewisePolynomial::child_of(const Point& u) const {
    int c = 0;
    for (int i = 0; i < dim; ++i) {
        if (u[i] < -0.5 || u[i] >= 0.5) return -1;
        if (u[i] >= 0.0) c |= 1 << i;
    }
    return c;
}

double PiecewisePolynomial::eval_on_cube(const Cube& Q, const Point& x) const {
    Point u(dim);
    for (int i = 0; i < dim; ++i) u[i] = (x[i] - Q.center[i]) / Q.side;
    const double norm = std::pow(Q.side, -0.5 * dim);
    return norm * eval_unit(u);
}

int alpert_dimension(int dim, int kappa) {
    const int M = static_cast<int>(monomials_up_to(dim, kappa - 1).size());
    return ((1 << dim) - 1) * M;
}

AlpertFamily build_alpert_family(int dim, int kappa) {
    if (dim < 1) throw DimensionError("build_alpert_family: dim must be >= 1");
    if (kappa < 1) throw Error("build_alpert_family: kappa must be >= 1");

    const auto monos = monomials_up_to(dim, kappa - 1);
    const int M = static_cast<int>(monos.size());
    const int nchild = 1 << dim;
    const int ncols = nchild * M;

    const Cube mother = Cube::unit(dim);
    const auto children = mother.children();

    // Raw basis e_{(c,beta)} = 1_child x^beta.  Moment constraints
    // int f x^alpha = 0 for all |alpha| <= kappa-1.
    Eigen::MatrixXd A(M, ncols);
    for (int r = 0; r < M; ++r) {
        for (int c = 0; c < nchild; ++c) {
            for (int b = 0; b < M; ++b) {
                double v = 1.0;
                for (int i = 0; i < dim; ++i) {
                    const int n = monos[r][i] + monos[b][i];
                    v *= (ipow(children[c].hi(i), n + 1) - ipow(children[c].lo(i), n + 1)) /
                         (n + 1);
                }
                A(r, c * M + b) = v;
            }
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    if (lu.rank() != M) {
        const double cond = std::abs(lu.matrixLU()(0, 0)) /
                            std::max(std::abs(lu.matrixLU()(M - 1, M - 1)), 1e-300);
        throw IllConditionedError(
            "build_alpert_family: moment constraint system is rank-deficient", cond);
    }
    Eigen::MatrixXd kernel = lu.kernel();  // ncols x (ncols - M)
    const int nmem = static_cast<int>(kernel.cols());
    if (nmem != alpert_dimension(dim, kappa))
        throw IllConditionedError("build_alpert_family: unexpected nullspace dimension",
                                  static_cast<double>(nmem));

    // Block-diagonal Gram of the raw basis (children are disjoint).
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ncols, ncols);
    for (int c = 0; c < nchild; ++c) {
        for (int b1 = 0; b1 < M; ++b1) {
            for (int b2 = 0; b2 < M; ++b2) {
                double v = 1.0;
                for (int i = 0; i < dim; ++i) {
                    const int n = monos[b1][i] + monos[b2][i];
                    v *= (ipow(children[c].hi(i), n + 1) - ipow(children[c].lo(i), n + 1)) /
                         (n + 1);
                }
                B(c * M + b1, c * M + b2) = v;
            }
        }
    }

    // Modified Gram-Schmidt with one re-orthogonalization pass, in the
    // B-inner product.
    auto dot = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return u.dot(B * v);
    };
    std::vector<Eigen::VectorXd> ortho;
    for (int j = 0; j < nmem; ++j) {
        Eigen::VectorXd v = kernel.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : ortho) v -= dot(u, v) * u;
        const double nrm = std::sqrt(dot(v, v));
        if (nrm < 1e-10)
            throw IllConditionedError("build_alpert_family: Gram-Schmidt breakdown", nrm);
        ortho.push_back(v / nrm);
    }

    AlpertFamily fam;
    fam.dim = dim;
    fam.kappa = kappa;
    for (int j = 0; j < nmem; ++j) {
        PiecewisePolynomial pw;
        pw.dim = dim;
        pw.supportCube = mother;
        pw.pieces.assign(nchild, Poly(dim));
        // Sign convention: first coefficient (child-major, graded monomial
        // order) with magnitude above threshold is made positive.
        double lead = 0.0;
        for (int c = 0; c < nchild && lead == 0.0; ++c)
            for (int b = 0; b < M; ++b)
                if (std::abs(ortho[j](c * M + b)) > 1e-9) {
                    lead = ortho[j](c * M + b);
                    break;
                }
        const double sgn = lead < 0 ? -1.0 : 1.0;
        for (int c = 0; c < nchild; ++c)
            for (int b = 0; b < M; ++b) {
                const double coeff = sgn * ortho[j](c * M + b);
                if (coeff != 0.0) pw.pieces[c].add_term(monos[b], coeff);
            }
        for (auto& p : pw.pieces) p.compress(1e-14);
        fam.members.push_back(std::move(pw));
    }
    return fam;
}

namespace {

nlohmann::json poly_to_json(const Poly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        terms.push_back({{"e", t.exps}, {"c", t.c}});
    }
    return terms;
}

Poly poly_from_json(int dim, const nlohmann::json& j) {
    Poly p(dim);
    for (const auto& t : j) {
        p.add_term(t.at("e").get<std::vector<int>>(), t.at("c").get<double>());
    }
    return p;
}

} // namespace

std::string family_to_json(const AlpertFamily& f) {
    nlohmann::json j;
    j["dim"] = f.dim;
    j["kappa"] = f.kappa;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : f.members) {
        nlohmann::json pieces = nlohmann::json::array();
        for (const auto& p : m.pieces) pieces.push_back(poly_to_json(p));
        members.push_back(pieces);
    }
    j["members"] = members;
    return j.dump();
}

AlpertFamily family_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    AlpertFamily f;
    f.dim = j.at("dim").get<int>();
    f.kappa = j.at("kappa").get<int>();
    for (const auto& jm : j.at("members")) {
        PiecewisePolynomial pw;
        pw.dim = f.dim;
        pw.supportCube = Cube::unit(f.dim);
        for (const auto& jp : jm) pw.pieces.push_back(poly_from_json(f.dim, jp));
        f.members.push_back(std::move(pw));
    }
    return f;
}

} // namespace extlab
