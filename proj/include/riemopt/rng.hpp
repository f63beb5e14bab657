#pragma once

#include <cmath>
#include <cstdint>

#include "riemopt/linalg.hpp"

namespace riemopt {

// Deterministic xorshift64* stream. The exact recurrence is part of the
// bench reproducibility contract, so ports in other languages can replay it:
//
//   state0 = seed XOR 0x9E3779B97F4A7C15 (or that constant itself if the
//            XOR yields zero)
//   next:    x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  state = x;
//            output = x * 0x2545F4914F6CDD1D  (mod 2^64)
//   unit:    next() >> 11, scaled by 2^-53, uniform in [0, 1)
//   normal:  Box-Muller, u1 = 1 - unit(), u2 = unit(),
//            result = sqrt(-2 ln u1) * cos(2 pi u2); one draw per call
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        state_ = seed ^ 0x9E3779B97F4A7C15ULL;
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = 1.0 - unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::uint64_t state_ = 0;
};

inline linalg::Vector random_vector(Rng& rng, int n) {
    linalg::Vector v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

inline linalg::Matrix random_matrix(Rng& rng, int rows, int cols) {
    linalg::Matrix m(rows, cols);
    for (auto& x : m.data()) x = rng.normal();
    return m;
}

// (G + G^T) / 2 for Gaussian G: a dense symmetric matrix with a full-support
// spectrum, the workhorse test input.
inline linalg::Matrix random_symmetric(Rng& rng, int n) {
    linalg::Matrix g = random_matrix(rng, n, n);
    linalg::Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (g(i, j) + g(j, i));
    return s;
}

}  // namespace riemopt
