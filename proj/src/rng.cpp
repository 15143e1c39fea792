#include "causalkit/rng.hpp"

namespace causalkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = splitmix64(h ^ (b + 0x7f4a7c159e3779b9ULL));
    h = splitmix64(h ^ (c + 0x2545f4914f6cdd1dULL));
    return h;
}

std::vector<Rational> Rng::rational_distribution(int size, int max_weight) {
    std::vector<BigInt> weights(size);
    BigInt total = 0;
    for (int i = 0; i < size; ++i) {
        weights[i] = BigInt(1 + below(static_cast<std::uint64_t>(max_weight)));
        total += weights[i];
    }
    std::vector<Rational> dist(size);
    for (int i = 0; i < size; ++i) dist[i] = Rational(weights[i], total);
    return dist;
}

std::vector<double> Rng::double_distribution(int size) {
    std::vector<double> w(size);
    double total = 0.0;
    for (int i = 0; i < size; ++i) {
        w[i] = unit() + 1e-6;
        total += w[i];
    }
    for (int i = 0; i < size; ++i) w[i] /= total;
    return w;
}

}  // namespace causalkit
