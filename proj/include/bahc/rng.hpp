#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace bahc {

// splitmix64 step; used both as a mixer and to derive stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fold coordinates into a seed. Order-sensitive by design.
inline std::uint64_t seed_mix(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t x = splitmix64(seed);
    for (std::uint64_t c : coords) x = splitmix64(x ^ c);
    return x;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// mt19937_64 with hand-rolled variate generation. The standard distributions
// are implementation-defined, so byte-stable outputs require our own.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection keeps it exactly uniform.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do { x = eng_(); } while (x >= limit);
        return x % n;
    }

    // Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Chi-square with integer degrees of freedom.
    double chi_square(int dof) {
        double s = 0.0;
        for (int k = 0; k < dof; ++k) {
            const double z = normal();
            s += z * z;
        }
        return s;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bahc
