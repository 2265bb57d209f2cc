#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

namespace gridsched::app {

// Deterministic uniform generator. Pinned to std::mt19937_64 with the
// high-53-bit double mapping so sequences are identical on every platform
// and toolchain; do not swap the algorithm without versioning scenarios.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [lo, hi] via rejection-free scaling of next().
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next() * static_cast<double>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

// Maps an estimate d to a value in [(1 - f_L) * d, (1 + f_M) * d) given a
// uniform draw rd in [0, 1).
double real_random(double d, double factor_less, double factor_more, double rd);

// Named (f_L, f_M) pairs for different estimation situations.
class FactorTable {
public:
    void set(const std::string& situation, double factor_less, double factor_more);
    // Applies real_random with the situation's factors; unknown situations
    // use (0, 0), i.e. the estimate passes through unchanged.
    double real(const std::string& situation, double d, UniformRng& rng) const;

private:
    std::map<std::string, std::pair<double, double>> factors_;
};

}  // namespace gridsched::app
