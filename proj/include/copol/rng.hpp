#ifndef COPOL_RNG_HPP
#define COPOL_RNG_HPP

#include <cstdint>

namespace copol {

// Counter-based random bits: every draw is a pure function of (seed, counters),
// so parallel batches are reproducible independent of scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash2(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(splitmix64(seed ^ 0x6a09e667f3bcc909ULL) ^ a);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(hash2(seed, a) ^ splitmix64(b ^ 0xbb67ae8584caa73bULL));
}

// uniform double in [0,1)
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// sequential stream with the same reproducibility guarantees
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), n_(0) {}

    std::uint64_t next_bits() { return hash3(seed_, stream_, n_++); }
    double next_u01() { return u01(next_bits()); }
    bool bernoulli(double p) { return next_u01() < p; }
    // uniform in {0,...,n-1}, n small
    std::uint64_t below(std::uint64_t n) { return next_bits() % n; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t n_;
};

} // namespace copol

#endif
