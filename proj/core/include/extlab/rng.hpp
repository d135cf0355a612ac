#ifndef EXTLAB_RNG_HPP
#define EXTLAB_RNG_HPP

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>

namespace extlab {

// Deterministic RNG wrapper.  std::mt19937_64 is fully specified by the
// standard, but the *distributions* are not, so we derive uniforms and
// normals from the raw bit stream ourselves.  Identical seed => identical
// stream on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0x1.0p-60) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Complex standard normal (real and imaginary parts i.i.d. N(0, 1/2)),
    // so E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double s = std::sqrt(0.5);
        const double re = normal(), im = normal();
        return {s * re, s * im};
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace extlab

#endif
