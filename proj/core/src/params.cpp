#include "extlab/params.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "extlab/errors.hpp"

namespace extlab {

void Params::validate(bool extension_experiment) const {
    std::vector<std::string> bad;
    const double dd = static_cast<double>(d);
    if (d < 2) bad.push_back("d: must be >= 2");
    if (s < 0 || s_lo < 0 || s_hi < s_lo) bad.push_back("s/s_lo/s_hi: invalid scan range");
    if (kappa < 1) bad.push_back("kappa: must be >= 1");
    if (!(eta > 0.0) || eta >= 0.5) bad.push_back("eta: need 0 < eta < 1/2");
    if (!(q >= 2.0 * dd / (dd - 1.0) - 1e-12))
        bad.push_back("q: must be at least 2d/(d-1) = " +
                      std::to_string(2.0 * dd / (dd - 1.0)));
    if (!(delta > 0.0) || delta > 0.5) bad.push_back("delta: need 0 < delta <= 1/2");
    if (!(eps > 0.0) || eps > 0.5) bad.push_back("eps: need 0 < eps <= 1/2");
    if (!(theta > 0.0) || !(theta < 1.0)) bad.push_back("theta: need 0 < theta < 1");
    if (!(sigma_eff() > delta / (1.0 - delta)))
        bad.push_back("sigma: must exceed delta/(1-delta)");
    if (extension_experiment && !(kappa > d))
        bad.push_back("kappa: extension experiments need kappa > d");
    if (tau < 2) bad.push_back("tau: must be >= 2");
    if (points_per_wavelength < 4.0) bad.push_back("points_per_wavelength: must be >= 4");
    if (!bad.empty()) {
        std::string msg = "invalid Params:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::map<std::string, std::string> Params::to_kv() const {
    std::map<std::string, std::string> kv;
    kv["d"] = std::to_string(d);
    kv["s"] = std::to_string(s);
    kv["s_lo"] = std::to_string(s_lo);
    kv["s_hi"] = std::to_string(s_hi);
    kv["kappa"] = std::to_string(kappa);
    kv["eta"] = fmt_double(eta);
    kv["q"] = fmt_double(q);
    kv["delta"] = fmt_double(delta);
    kv["eps"] = fmt_double(eps);
    kv["theta"] = fmt_double(theta);
    kv["sigma"] = fmt_double(sigma);
    kv["tau"] = std::to_string(tau);
    kv["tau_prime"] = std::to_string(tau_prime);
    kv["seed"] = std::to_string(seed);
    kv["points_per_wavelength"] = fmt_double(points_per_wavelength);
    kv["gauss_order"] = std::to_string(gauss_order);
    kv["quad_tol"] = fmt_double(quad_tol);
    kv["sampler_n"] = std::to_string(sampler_n);
    kv["neumann_tol"] = fmt_double(neumann_tol);
    kv["neumann_max_terms"] = std::to_string(neumann_max_terms);
    kv["threads"] = std::to_string(threads);
    return kv;
}

Params Params::from_kv(const std::map<std::string, std::string>& kv) {
    Params p;
    auto geti = [&](const char* k, int& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stoi(it->second);
    };
    auto getd = [&](const char* k, double& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stod(it->second);
    };
    geti("d", p.d);
    geti("s", p.s);
    geti("s_lo", p.s_lo);
    geti("s_hi", p.s_hi);
    geti("kappa", p.kappa);
    getd("eta", p.eta);
    getd("q", p.q);
    getd("delta", p.delta);
    getd("eps", p.eps);
    getd("theta", p.theta);
    getd("sigma", p.sigma);
    geti("tau", p.tau);
    geti("tau_prime", p.tau_prime);
    if (auto it = kv.find("seed"); it != kv.end()) p.seed = std::stoull(it->second);
    getd("points_per_wavelength", p.points_per_wavelength);
    geti("gauss_order", p.gauss_order);
    getd("quad_tol", p.quad_tol);
    geti("sampler_n", p.sampler_n);
    getd("neumann_tol", p.neumann_tol);
    geti("neumann_max_terms", p.neumann_max_terms);
    geti("threads", p.threads);
    // Reject unknown keys so typos in config files fail loudly.
    const auto known = Params{}.to_kv();
    for (const auto& [k, v] : kv) {
        if (known.find(k) == known.end())
            throw ConfigError("unknown config key: " + k);
    }
    return p;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + s);
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
}

} // namespace extlab
