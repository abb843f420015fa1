#ifndef TBMC_RANDOM_HPP
#define TBMC_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

/**
 * @file random.hpp
 * @brief Seed derivation and the few sampling primitives the generators need.
 *
 * The standard distributions are implementation-defined, so uniform reals and
 * bounded integers are drawn directly from the engine's bits. Output is then
 * reproducible across standard libraries, not only across runs.
 */

namespace tbmc {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * Counter-based child seed: the same (master, stream, index) always maps to
 * the same seed, whatever order the trials are executed in.
 */
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& rng, double p) {
    return uniform01(rng) < p;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// `count` distinct values from [0, population), in draw order (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(Engine& rng, std::size_t population, std::size_t count) {
    std::vector<std::size_t> pool(population);
    for (std::size_t i = 0; i < population; ++i) {
        pool[i] = i;
    }
    if (count > population) {
        count = population;
    }
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, population - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}

#endif
