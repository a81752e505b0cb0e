#ifndef LEIBNIZ_PARALLEL_HPP
#define LEIBNIZ_PARALLEL_HPP

#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace leibniz {

// Sweeps (solver restarts, pairwise scans, fuzz batches) are data parallel:
// every item derives its RNG stream from (seed, index) and writes only its own
// slot, so the serial and OpenMP paths produce identical results. The serial
// path is kept as the reference for tests and benchmarks.
enum class RunPolicy { serial, parallel };

template <class Fn>
void parallel_for(int count, RunPolicy policy, Fn&& fn) {
#ifdef _OPENMP
    if (policy == RunPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
#else
    (void)policy;
#endif
    for (int i = 0; i < count; ++i) fn(i);
}

// Deterministic per-item RNG stream: splitmix64 over a mixed (seed, index) key.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (kept explicit for cross-run determinism)
    double next_normal() {
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 1e-300) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    int next_int(int bound) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound)); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }
    std::uint64_t state_;
};

} // namespace leibniz

#endif
