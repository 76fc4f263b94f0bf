#pragma once

// Deterministic random stream (independent of library distributions, so that
// identical seeds give byte-identical results on every platform).

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "model_geometry.hpp"

namespace catsurf {

struct RandomStream {
    std::uint64_t state;

    explicit RandomStream(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {
        next();
        next();
    }
    std::uint64_t next() {  // splitmix64
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    double gaussian() {  // Box-Muller on explicit uniforms, fully deterministic
        double u1 = std::max(uniform(), 0x1.0p-60);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
};


}  // namespace catsurf
