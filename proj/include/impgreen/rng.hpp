#ifndef IMPGREEN_RNG_HPP
#define IMPGREEN_RNG_HPP

#include <cstdint>
#include <cmath>

namespace impgreen {

// splitmix64: tiny, deterministic across platforms.  All randomized
// sampling in the project goes through this generator so that a seed
// fully determines every report byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // log-uniform on [a,b], a,b > 0
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }

    int uniform_int(int n) { // 0..n-1
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

    // derive an independent stream (for per-task determinism)
    Rng fork() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ULL); }

  private:
    std::uint64_t state_;
};

} // namespace impgreen

#endif
