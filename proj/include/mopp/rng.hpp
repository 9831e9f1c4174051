#pragma once

#include <cstdint>
#include <random>

namespace mopp {

/// SplitMix64 mixing step. Used to derive decorrelated sub-seeds
/// (per-attempt, per-run) from a master seed.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt));
}

/// Deterministic RNG wrapper. std::mt19937_64 has a standard-mandated
/// output sequence, and the bounded draws below are implemented here rather
/// than with std::uniform_*_distribution (whose output is
/// implementation-defined), so identical seeds give identical streams on
/// every platform.
class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive. Rejection sampling keeps the
    /// draw unbiased.
    int uniform_int(int lo, int hi) {
        const uint64_t span = uint64_t(hi - lo) + 1;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return lo + int(v % span);
    }

    /// Uniform real in [0, 1) with 53 bits of precision.
    double uniform_real01() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * uniform_real01();
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mopp

