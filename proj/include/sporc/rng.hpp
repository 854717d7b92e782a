#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace sporc {

/// Deterministic 64-bit generator: xoshiro256** seeded through splitmix64.
/// All distributions are implemented here so the stream depends only on this
/// file, not on the standard library's unspecified algorithms. Streams for
/// independent purposes are derived with child(), which hashes a tag into a
/// fresh seed, so adding a consumer never shifts another consumer's draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    /// Derived generator for an independent named stream.
    Rng child(std::uint64_t tag) const;

    std::uint64_t next_u64();

    /// Uniform on (0,1); never returns an exact endpoint.
    double uniform01();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p);
    /// Standard normal via Box-Muller (one value per two draws; no caching).
    double normal();
    double normal(double mu, double sigma);
    /// Gamma(shape, scale 1) by Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Stable derived seed for a named sub-purpose of a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace sporc
