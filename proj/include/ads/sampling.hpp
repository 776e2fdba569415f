#ifndef ADS_SAMPLING_HPP
#define ADS_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "ads/lie_core.hpp"

// Deterministic sampling helpers. All draws go through explicit bit
// manipulation of mt19937_64 output so streams are pinned across platforms.

namespace ads {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double u01() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = u01(), v = u01();
        while (u <= 1e-300) u = u01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double t = 2.0 * M_PI * v;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Random point on the quadric Q = 1 with nu(x) uniform in [0, nu_max].
inline QuadricPoint rand_quadric(int m, double nu_max, Rng& rng) {
    const double nu = rng.uniform(0.0, nu_max);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<double> c(std::size_t(m) + 2, 0.0);
    c[0] = std::cosh(nu / 2.0) * std::cos(phi);
    c[1] = std::cosh(nu / 2.0) * std::sin(phi);
    double norm2 = 0.0;
    std::vector<double> u(static_cast<std::size_t>(m), 0.0);
    for (auto& v : u) {
        v = rng.normal();
        norm2 += v * v;
    }
    const double scale = std::sinh(nu / 2.0) / std::sqrt(std::max(norm2, 1e-300));
    for (int i = 0; i < m; ++i) c[std::size_t(i) + 2] = scale * u[std::size_t(i)];
    return QuadricPoint(std::move(c));
}

/// Random SL2(R) element R(alpha) a_s R(beta) with mu <= cap.
inline Mat2 rand_small_mat(double cap, Rng& rng) {
    const double s = rng.uniform(0.0, cap);
    return rotation(rng.uniform(0.0, 2.0 * M_PI)) * boost(s) *
           rotation(rng.uniform(0.0, 2.0 * M_PI));
}

inline GroupElement rand_small_element(double cap, Rng& rng) {
    return {rand_small_mat(cap, rng), rand_small_mat(cap, rng)};
}

}  // namespace ads

#endif
