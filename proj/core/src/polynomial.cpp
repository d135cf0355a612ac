#include "extlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "extlab/errors.hpp"

namespace extlab {

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

Poly Poly::constant(int dim, double value) {
    Poly p(dim);
    if (value != 0.0) p.add_term(std::vector<int>(dim, 0), value);
    return p;
}

Poly Poly::monomial(int dim, const std::vector<int>& exps, double c) {
    Poly p(dim);
    p.add_term(exps, c);
    return p;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

void Poly::add_term(const std::vector<int>& exps, double c) {
    if (static_cast<int>(exps.size()) != dim_)
        throw DimensionError("Poly::add_term: exponent length != dim");
    if (c == 0.0) return;
    for (auto& t : terms_) {
        if (t.exps == exps) {
            t.c += c;
            return;
        }
    }
    terms_.push_back({exps, c});
}

Poly Poly::operator+(const Poly& other) const {
    Poly out = *this;
    for (const auto& t : other.terms_) out.add_term(t.exps, t.c);
    return out;
}

Poly Poly::operator-(const Poly& other) const {
    Poly out = *this;
    for (const auto& t : other.terms_) out.add_term(t.exps, -t.c);
    return out;
}

Poly Poly::operator*(const Poly& other) const {
    Poly out(dim_);
    std::map<std::vector<int>, double> acc;
    for (const auto& a : terms_) {
        for (const auto& b : other.terms_) {
            std::vector<int> e(dim_);
            for (int i = 0; i < dim_; ++i) e[i] = a.exps[i] + b.exps[i];
            acc[e] += a.c * b.c;
        }
    }
    for (auto& [e, c] : acc)
        if (c != 0.0) out.terms_.push_back({e, c});
    return out;
}

Poly Poly::scaled(double a) const {
    Poly out(dim_);
    if (a == 0.0) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.c *= a;
    return out;
}

double Poly::eval(const Point& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double v = t.c;
        for (int i = 0; i < dim_; ++i) v *= ipow(x[i], t.exps[i]);
        s += v;
    }
    return s;
}

Poly Poly::affine_substitute(const Point& a, const Point& b) const {
    // Precompute (a_i + b_i u)^n up to the max exponent per axis.
    std::vector<int> maxe(dim_, 0);
    for (const auto& t : terms_)
        for (int i = 0; i < dim_; ++i) maxe[i] = std::max(maxe[i], t.exps[i]);

    // powers[i][n] = coefficients of (a_i + b_i u)^n as a univariate poly in u.
    std::vector<std::vector<std::vector<double>>> powers(dim_);
    for (int i = 0; i < dim_; ++i) {
        powers[i].resize(maxe[i] + 1);
        powers[i][0] = {1.0};
        for (int n = 1; n <= maxe[i]; ++n) {
            const auto& prev = powers[i][n - 1];
            std::vector<double> cur(n + 1, 0.0);
            for (int j = 0; j < n; ++j) {
                cur[j] += prev[j] * a[i];
                cur[j + 1] += prev[j] * b[i];
            }
            powers[i][n] = std::move(cur);
        }
    }

    std::map<std::vector<int>, double> acc;
    std::vector<int> e(dim_);
    for (const auto& t : terms_) {
        // Expand the product over axes recursively.
        std::vector<std::pair<std::vector<int>, double>> partial = {{std::vector<int>(dim_, 0), t.c}};
        for (int i = 0; i < dim_; ++i) {
            const auto& pw = powers[i][t.exps[i]];
            std::vector<std::pair<std::vector<int>, double>> next;
            next.reserve(partial.size() * pw.size());
            for (const auto& [exps, c] : partial) {
                for (int j = 0; j < static_cast<int>(pw.size()); ++j) {
                    if (pw[j] == 0.0) continue;
                    auto e2 = exps;
                    e2[i] = j;
                    next.emplace_back(std::move(e2), c * pw[j]);
                }
            }
            partial = std::move(next);
        }
        for (auto& [exps, c] : partial) acc[exps] += c;
    }

    Poly out(dim_);
    for (auto& [exps, c] : acc)
        if (c != 0.0) out.terms_.push_back({exps, c});
    return out;
}

Poly Poly::derivative(int axis) const {
    Poly out(dim_);
    for (const auto& t : terms_) {
        if (t.exps[axis] == 0) continue;
        auto e = t.exps;
        const double c = t.c * e[axis];
        e[axis] -= 1;
        out.add_term(e, c);
    }
    return out;
}

double Poly::integrate(const Cube& box) const {
    return integrate_against_monomial(box, std::vector<int>(dim_, 0));
}

double Poly::integrate_against_monomial(const Cube& box,
                                        const std::vector<int>& beta) const {
    double total = 0.0;
    for (const auto& t : terms_) {
        double v = t.c;
        for (int i = 0; i < dim_; ++i) {
            const int n = t.exps[i] + beta[i];
            v *= (ipow(box.hi(i), n + 1) - ipow(box.lo(i), n + 1)) / (n + 1);
        }
        total += v;
    }
    return total;
}

void Poly::compress(double tol) {
    std::map<std::vector<int>, double> acc;
    for (const auto& t : terms_) acc[t.exps] += t.c;
    terms_.clear();
    for (auto& [e, c] : acc)
        if (std::abs(c) > tol) terms_.push_back({e, c});
}

} // namespace extlab
