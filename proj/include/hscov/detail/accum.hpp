#ifndef HSCOV_DETAIL_ACCUM_HPP
#define HSCOV_DETAIL_ACCUM_HPP

#include <cmath>
#include <cstdint>

namespace hscov::detail {

// Neumaier-compensated accumulator. Decay experiments compare values that
// differ by many orders of magnitude across truncations, so plain summation
// noise is not acceptable in the norm kernels.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Deterministic RNG used by every seeded operation. The distributions are
// hand-rolled on top of a fixed 64-bit generator so that a seed pins the
// sample sequence independent of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift* (Marsaglia); period 2^64-1, plenty for sampling loops
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller on (0,1] uniforms
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace hscov::detail

#endif
