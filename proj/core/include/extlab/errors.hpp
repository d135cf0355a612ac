#ifndef EXTLAB_ERRORS_HPP
#define EXTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace extlab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Quadrature failed its step-halving agreement check or exhausted its
// panel budget.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double disagreement)
        : Error(msg), disagreement(disagreement) {}
    double disagreement;
};

// Neumann iteration (or any fixed-point loop) failed to contract.  Carries
// the observed contraction ratio so the caller can report it.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double observed_ratio, int terms)
        : Error(msg), observed_ratio(observed_ratio), terms(terms) {}
    double observed_ratio;
    int terms;
};

// Linear system assembled from moment constraints is numerically
// rank-deficient at working precision.
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& msg, double condition_number)
        : Error(msg), condition_number(condition_number) {}
    double condition_number;
};

} // namespace extlab

#endif
