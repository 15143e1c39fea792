#ifndef CAUSALKIT_RNG_HPP
#define CAUSALKIT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "causalkit/rational.hpp"

namespace causalkit {

// Counter-mode seed derivation: every (trial, variable, row) gets its own
// stream, so results do not depend on evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// Deterministic across platforms: raw mt19937_64 output only, no
// std::*_distribution (their output is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound). Modulo bias is irrelevant at our bounds.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Random distribution over `size` outcomes with small positive rational
    // weights (numerators in 1..max_weight).
    std::vector<Rational> rational_distribution(int size, int max_weight = 64);

    // Random distribution over `size` outcomes, entries strictly positive.
    std::vector<double> double_distribution(int size);

  private:
    std::mt19937_64 engine_;
};

}  // namespace causalkit

#endif  // CAUSALKIT_RNG_HPP
