#ifndef TBMC_SYNTH_HPP
#define TBMC_SYNTH_HPP

#include "binmat.hpp"
#include "error.hpp"
#include "random.hpp"
#include "tiling.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

/**
 * @file synth.hpp
 * @brief Seeded generators for planted-tile and block-diagonal test matrices.
 */

namespace tbmc {

struct PlantedSpec {
    std::size_t m = 100;
    std::size_t n = 100;
    std::size_t k_tiles = 1;
    double tau = 0.7;
    double eps = 0.03;
    double rho = 0.7;
    std::uint64_t seed = 0;
};

struct BlockDiagSpec {
    std::size_t m = 64;
    std::size_t k = 4;
    double a = 0.5;
    double rho = 1.0;
    std::uint64_t seed = 0;
};

/// The noiseless/fully known side of a generated instance.
struct GroundTruth {
    std::size_t rows = 0;
    std::size_t cols = 0;
    BitVector full;  // row-major, after noise
    BitVector mask;  // row-major, 1 = observed
    Tiling tiling;   // the planted tiles

    Bit at(std::size_t i, std::size_t j) const { return full[i * cols + j]; }
};

struct GeneratedInstance {
    ObservedBinaryMatrix observed;
    GroundTruth truth;
};

inline void validate(const PlantedSpec& s) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::SpecInvalid, what); };
    if (s.m == 0 || s.n == 0) {
        fail("m and n must be positive");
    }
    if (s.k_tiles == 0 || s.k_tiles > s.m) {
        fail("tiles must be between 1 and m");
    }
    if (!(s.tau > 0.0 && s.tau <= 1.0)) {
        fail("tau must lie in (0, 1]");
    }
    if (!(s.eps >= 0.0 && s.eps < 0.5)) {
        fail("eps must lie in [0, 0.5)");
    }
    if (!(s.rho > 0.0 && s.rho <= 1.0)) {
        fail("rho must lie in (0, 1]");
    }
}

inline void validate(const BlockDiagSpec& s) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::SpecInvalid, what); };
    if (s.m == 0 || s.k == 0) {
        fail("m and k must be positive");
    }
    if (!(s.a > 0.0 && s.a <= 1.0)) {
        fail("a must lie in (0, 1]");
    }
    if (!(s.rho > 0.0 && s.rho <= 1.0)) {
        fail("rho must lie in (0, 1]");
    }
}

namespace detail {

inline ObservedBinaryMatrix draw_mask(Engine& rng, std::size_t rows, std::size_t cols, double rho,
                                      const BitVector& full, BitVector& mask) {
    mask.assign(rows * cols, 0);
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(rho * static_cast<double>(rows * cols)) + 16);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t cell = i * cols + j;
            if (rho >= 1.0 || bernoulli(rng, rho)) {
                mask[cell] = 1;
                entries.push_back(Triplet{i, j, full[cell]});
            }
        }
    }
    return ObservedBinaryMatrix::from_triplets(rows, cols, std::move(entries));
}

}

/**
 * Planted tiles: the rows are cut into `k_tiles` contiguous blocks (the last
 * takes the remainder), each block gets one random set of round(tau * n)
 * columns, exactly round(eps * m * n) distinct cells are then flipped, and
 * finally each cell is observed independently with probability rho.
 */
inline GeneratedInstance gen_planted(const PlantedSpec& spec) {
    validate(spec);
    Engine rng(spec.seed);
    GeneratedInstance out;
    auto& gt = out.truth;
    gt.rows = spec.m;
    gt.cols = spec.n;
    gt.full.assign(spec.m * spec.n, 0);
    gt.tiling.rows = spec.m;
    gt.tiling.cols = spec.n;

    const std::size_t block = spec.m / spec.k_tiles;
    const auto width = static_cast<std::size_t>(std::llround(spec.tau * static_cast<double>(spec.n)));
    for (std::size_t t = 0; t < spec.k_tiles; ++t) {
        const std::size_t begin = t * block;
        const std::size_t end = t + 1 == spec.k_tiles ? spec.m : begin + block;
        Tile tile;
        tile.u.assign(spec.m, 0);
        tile.v.assign(spec.n, 0);
        for (auto c : sample_without_replacement(rng, spec.n, width)) {
            tile.v[c] = 1;
        }
        for (std::size_t i = begin; i < end; ++i) {
            tile.u[i] = 1;
            for (std::size_t j = 0; j < spec.n; ++j) {
                gt.full[i * spec.n + j] = tile.v[j];
            }
        }
        gt.tiling.tiles.push_back(std::move(tile));
    }

    const auto flips = static_cast<std::size_t>(std::llround(spec.eps * static_cast<double>(spec.m * spec.n)));
    for (auto cell : sample_without_replacement(rng, spec.m * spec.n, flips)) {
        gt.full[cell] ^= 1;
    }
    out.observed = detail::draw_mask(rng, spec.m, spec.n, spec.rho, gt.full, gt.mask);
    return out;
}

/**
 * Row counts of the diagonal blocks: tau_1 = (1 - a) / (1 - a^k), tau_{l+1} =
 * a tau_l, each rounded to m tau_l rows with the rounding remainder given to
 * the first block. Throws `SpecInvalid` if any block ends up empty.
 */
inline std::vector<std::size_t> block_sizes(std::size_t m, std::size_t k, double a) {
    std::vector<double> tau(k);
    tau[0] = a >= 1.0 ? 1.0 / static_cast<double>(k) : (1.0 - a) / (1.0 - std::pow(a, static_cast<double>(k)));
    for (std::size_t l = 1; l < k; ++l) {
        tau[l] = a * tau[l - 1];
    }
    std::vector<std::size_t> sizes(k);
    long long assigned = 0;
    for (std::size_t l = 0; l < k; ++l) {
        sizes[l] = static_cast<std::size_t>(std::llround(static_cast<double>(m) * tau[l]));
        assigned += static_cast<long long>(sizes[l]);
    }
    const long long first = static_cast<long long>(sizes[0]) + static_cast<long long>(m) - assigned;
    if (first < 1) {
        throw Error(ErrorCode::SpecInvalid, "first block rounds to no rows");
    }
    sizes[0] = static_cast<std::size_t>(first);
    for (std::size_t l = 0; l < k; ++l) {
        if (sizes[l] == 0) {
            throw Error(ErrorCode::SpecInvalid, "block " + std::to_string(l + 1) + " rounds to zero rows");
        }
    }
    return sizes;
}

/// Symmetric block-diagonal ones with geometrically shrinking blocks, then a rho mask.
inline GeneratedInstance gen_block_diagonal(const BlockDiagSpec& spec) {
    validate(spec);
    const auto sizes = block_sizes(spec.m, spec.k, spec.a);
    Engine rng(spec.seed);
    GeneratedInstance out;
    auto& gt = out.truth;
    gt.rows = gt.cols = spec.m;
    gt.full.assign(spec.m * spec.m, 0);
    gt.tiling.rows = gt.tiling.cols = spec.m;

    std::size_t begin = 0;
    for (auto size : sizes) {
        Tile tile;
        tile.u.assign(spec.m, 0);
        tile.v.assign(spec.m, 0);
        for (std::size_t i = begin; i < begin + size; ++i) {
            tile.u[i] = 1;
            tile.v[i] = 1;
            for (std::size_t j = begin; j < begin + size; ++j) {
                gt.full[i * spec.m + j] = 1;
            }
        }
        gt.tiling.tiles.push_back(std::move(tile));
        begin += size;
    }
    out.observed = detail::draw_mask(rng, spec.m, spec.m, spec.rho, gt.full, gt.mask);
    return out;
}

struct RecoveryScore {
    bool exact = false;
    double cell_accuracy = 0.0;
};

/// Compares the tiling's prediction with the full ground-truth matrix on every cell.
inline RecoveryScore recovery_score(const Tiling& t, const GroundTruth& gt) {
    if (t.rows != gt.rows || t.cols != gt.cols) {
        throw Error(ErrorCode::DimensionMismatch, "tiling and ground truth shapes differ");
    }
    std::size_t correct = 0;
    if (is_row_partition(t)) {
        TilingPredictor p(t);
        for (std::size_t i = 0; i < gt.rows; ++i) {
            for (std::size_t j = 0; j < gt.cols; ++j) {
                correct += p(i, j) == gt.at(i, j);
            }
        }
    } else {
        for (std::size_t i = 0; i < gt.rows; ++i) {
            for (std::size_t j = 0; j < gt.cols; ++j) {
                correct += predict(t, i, j) == gt.at(i, j);
            }
        }
    }
    const std::size_t total = gt.rows * gt.cols;
    RecoveryScore s;
    s.exact = correct == total;
    s.cell_accuracy = total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
    return s;
}

// key=value spec text

namespace detail {

inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

template <typename T>
void read_key(const std::map<std::string, std::string>& kv, const std::string& key, T& target) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        return;
    }
    std::istringstream in(it->second);
    T value{};
    in >> value;
    if (in.fail() || !in.eof()) {
        throw Error(ErrorCode::ParseError, "bad value for " + key + ": " + it->second);
    }
    target = value;
}

inline std::string format_double(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

}

inline std::string to_config(const PlantedSpec& s) {
    return "model=planted\nm=" + std::to_string(s.m) + "\nn=" + std::to_string(s.n) +
           "\ntiles=" + std::to_string(s.k_tiles) + "\ntau=" + detail::format_double(s.tau) +
           "\neps=" + detail::format_double(s.eps) + "\nrho=" + detail::format_double(s.rho) +
           "\nseed=" + std::to_string(s.seed) + "\n";
}

inline std::string to_config(const BlockDiagSpec& s) {
    return "model=blockdiag\nm=" + std::to_string(s.m) + "\nk=" + std::to_string(s.k) +
           "\na=" + detail::format_double(s.a) + "\nrho=" + detail::format_double(s.rho) +
           "\nseed=" + std::to_string(s.seed) + "\n";
}

inline PlantedSpec planted_from_config(const std::string& text, PlantedSpec base = {}) {
    const auto kv = detail::parse_key_values(text);
    if (auto it = kv.find("model"); it != kv.end() && it->second != "planted") {
        throw Error(ErrorCode::ParseError, "config describes model " + it->second);
    }
    detail::read_key(kv, "m", base.m);
    detail::read_key(kv, "n", base.n);
    detail::read_key(kv, "tiles", base.k_tiles);
    detail::read_key(kv, "tau", base.tau);
    detail::read_key(kv, "eps", base.eps);
    detail::read_key(kv, "rho", base.rho);
    detail::read_key(kv, "seed", base.seed);
    return base;
}

inline BlockDiagSpec blockdiag_from_config(const std::string& text, BlockDiagSpec base = {}) {
    const auto kv = detail::parse_key_values(text);
    if (auto it = kv.find("model"); it != kv.end() && it->second != "blockdiag") {
        throw Error(ErrorCode::ParseError, "config describes model " + it->second);
    }
    detail::read_key(kv, "m", base.m);
    detail::read_key(kv, "k", base.k);
    detail::read_key(kv, "a", base.a);
    detail::read_key(kv, "rho", base.rho);
    detail::read_key(kv, "seed", base.seed);
    return base;
}

}

#endif
