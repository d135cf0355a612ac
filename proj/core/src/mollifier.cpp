#include "extlab/mollifier.hpp"

#include <Eigen/Dense>
#include <cmath>

#include <nlohmann/json.hpp>

#include "extlab/alpert.hpp"
#include "extlab/errors.hpp"

namespace extlab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// chi_n(r) = int_{-1}^{1} u^n (1-u^2)^r du  (0 for odd n).
double full_bump_moment(int n, int r) {
    if (n % 2 == 1) return 0.0;
    double s = 0.0;
    for (int j = 0; j <= r; ++j)
        s += binom(r, j) * (j % 2 ? -1.0 : 1.0) * 2.0 / (n + 2 * j + 1);
    return s;
}

} // namespace

double Mollifier::partial_moment(int n, double a, double b) const {
    // Antiderivative of u^n (1-u^2)^r: sum_j (-1)^j C(r,j) u^{n+2j+1}/(n+2j+1).
    auto F = [&](double u) {
        double s = 0.0;
        for (int j = 0; j <= r; ++j)
            s += binom(r, j) * (j % 2 ? -1.0 : 1.0) * ipow(u, n + 2 * j + 1) /
                 (n + 2 * j + 1);
        return s;
    };
    if (b <= a) return 0.0;
    return F(b) - F(a);
}

double Mollifier::eval(const Point& x) const {
    double bump = 1.0;
    for (int i = 0; i < dim; ++i) {
        const double t = 1.0 - x[i] * x[i];
        if (t <= 0.0) return 0.0;
        bump *= ipow(t, r);
    }
    return q.eval(x) * bump;
}

double Mollifier::moment(const std::vector<int>& gamma) const {
    double total = 0.0;
    for (const auto& t : q.terms()) {
        double v = t.c;
        for (int i = 0; i < dim; ++i) v *= full_bump_moment(t.exps[i] + gamma[i], r);
        total += v;
    }
    return total;
}

Mollifier build_mollifier(int dim, int kappa, int r) {
    if (dim < 1) throw DimensionError("build_mollifier: dim must be >= 1");
    if (kappa < 1) throw Error("build_mollifier: kappa must be >= 1");
    if (r < 1) throw Error("build_mollifier: r must be >= 1");

    const auto monos = monomials_up_to(dim, kappa - 1);
    const int M = static_cast<int>(monos.size());
    Eigen::MatrixXd A(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            double v = 1.0;
            for (int d = 0; d < dim; ++d)
                v *= full_bump_moment(monos[i][d] + monos[j][d], r);
            A(i, j) = v;
        }
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(M);
    e0(0) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    const double pmax = std::abs(lu.matrixLU()(0, 0));
    const double pmin = std::abs(lu.matrixLU()(M - 1, M - 1));
    if (!lu.isInvertible() || pmin < 1e-13 * pmax)
        throw IllConditionedError("build_mollifier: singular moment matrix",
                                  pmax / std::max(pmin, 1e-300));
    Eigen::VectorXd c = lu.solve(e0);

    Mollifier m;
    m.dim = dim;
    m.kappa = kappa;
    m.r = r;
    m.q = Poly(dim);
    for (int i = 0; i < M; ++i)
        if (c(i) != 0.0) m.q.add_term(monos[i], c(i));
    return m;
}

std::string mollifier_to_json(const Mollifier& m) {
    nlohmann::json j;
    j["dim"] = m.dim;
    j["kappa"] = m.kappa;
    j["r"] = m.r;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : m.q.terms()) terms.push_back({{"e", t.exps}, {"c", t.c}});
    j["q"] = terms;
    return j.dump();
}

Mollifier mollifier_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Mollifier m;
    m.dim = j.at("dim").get<int>();
    m.kappa = j.at("kappa").get<int>();
    m.r = j.at("r").get<int>();
    m.q = Poly(m.dim);
    for (const auto& t : j.at("q"))
        m.q.add_term(t.at("e").get<std::vector<int>>(), t.at("c").get<double>());
    return m;
}

} // namespace extlab
