#ifndef EXTLAB_PARAMS_HPP
#define EXTLAB_PARAMS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace extlab {

// All scalar knobs in one place.  Defaults are the desk-scale values used by
// the experiment suite.
struct Params {
    int d = 2;       // ambient dimension; the parameter domain has dim d-1
    int s = 4;       // scale (N = 2^s)
    int s_lo = 3;    // scan range where an experiment sweeps s
    int s_hi = 6;
    int kappa = 3;   // vanishing-moment order (> d for extension runs)
    double eta = 1.0 / 64.0;
    double q = 4.0;  // Lebesgue exponent
    double delta = 0.1;
    double eps = 0.1;
    double theta = 0.2;
    double sigma = 0.0;  // 0 -> 2 delta / (1 - delta)
    int tau = 2;
    int tau_prime = 0;  // 0 -> kappa - 1
    std::uint64_t seed = 12345;

    // quadrature defaults
    double points_per_wavelength = 8.0;
    int gauss_order = 8;
    double quad_tol = 1e-9;
    int sampler_n = 0;  // shifts per axis for grid averaging; 0 -> 4 * 2^s + 1

    double neumann_tol = 1e-8;
    int neumann_max_terms = 400;

    int threads = 0;  // 0 -> hardware

    double sigma_eff() const { return sigma > 0 ? sigma : 2.0 * delta / (1.0 - delta); }
    int tau_prime_eff() const { return tau_prime > 0 ? tau_prime : kappa - 1; }
    int sampler_n_eff() const { return sampler_n > 0 ? sampler_n : 4 * (1 << s) + 1; }

    // Throws ConfigError naming every violated invariant.
    void validate(bool extension_experiment) const;

    std::map<std::string, std::string> to_kv() const;
    static Params from_kv(const std::map<std::string, std::string>& kv);
};

// Flat "key = value" config file with # comments.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Apply --set key=value overrides.
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& sets);

} // namespace extlab

#endif
