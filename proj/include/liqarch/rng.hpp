#pragma once

#include <cmath>
#include <cstdint>

namespace liqarch {

// Deterministic splitmix64 stream. Self-contained so generated fixtures are
// bitwise reproducible across platforms and thread counts; sub-streams for
// parallel work come from child(), never from sharing one stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; caches the spare deviate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

    // Knuth's product-of-uniforms method; adequate for the small intensities
    // used here (per-day jump counts).
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        double limit = std::exp(-lambda);
        double prod = uniform();
        int n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }

    double lognormal(double mu, double sigma) { return std::exp(gaussian(mu, sigma)); }

    // Independent child stream i; documented splitmix-style derivation.
    Rng child(std::uint64_t i) const {
        Rng mix(state_ ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        return Rng(mix.next_u64());
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace liqarch
