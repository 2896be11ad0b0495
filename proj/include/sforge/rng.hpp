#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sforge {

// mt19937_64 wrapped with explicit value mappings. The standard
// distributions are implementation-defined, which breaks bit-level
// reproducibility between library versions, so the mappings live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with 53-bit resolution
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // uniform integer in [0, n)
    std::size_t below(std::size_t n) {
        if (n <= 1) return 0;
        auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller, one value per call (the pair partner is discarded to
    // keep the stream position independent of call parity)
    double gaussian(double mean = 0.0, double sd = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        return mean + sd * z;
    }

    // Fisher-Yates over [0, n)
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sforge
