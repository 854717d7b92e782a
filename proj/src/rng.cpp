#include "sporc/rng.hpp"

namespace sporc {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

Rng Rng::child(std::uint64_t tag) const {
    std::uint64_t sm = seed_ ^ (0xa0761d6478bd642fULL + tag);
    std::uint64_t mixed = splitmix64(sm);
    return Rng(mixed);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next_u64() {
    // xoshiro256** by Blackman and Vigna.
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    // 53-bit mantissa, offset half a ulp so 0 and 1 are unreachable.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

double Rng::normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double Rng::normal(double mu, double sigma) {
    return mu + sigma * normal();
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        // Boost trick: Gamma(a) = Gamma(a+1) * U^(1/a).
        double u = uniform01();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
    std::uint64_t state = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
    return splitmix64(state);
}

}  // namespace sporc
