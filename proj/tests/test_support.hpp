#ifndef TBMC_TESTS_TEST_SUPPORT_HPP
#define TBMC_TESTS_TEST_SUPPORT_HPP

// Helpers shared by the unit tests: compact matrix literals, random instances
// and brute-force reference answers that do not reuse any library solver.

#include "tbmc/binmat.hpp"
#include "tbmc/random.hpp"
#include "tbmc/tiling.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace tbmc::support {

/// "10?;0?1" -> 2x3 matrix; '?' marks an unobserved cell.
inline ObservedBinaryMatrix parse_matrix(const std::string& text) {
    std::vector<Triplet> entries;
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t cols = 0;
    for (char ch : text) {
        if (ch == ';') {
            cols = col;
            ++row;
            col = 0;
            continue;
        }
        if (ch == '0' || ch == '1') {
            entries.push_back(Triplet{row, col, static_cast<Bit>(ch - '0')});
        }
        ++col;
    }
    if (!text.empty()) {
        cols = col;
        ++row;
    }
    return ObservedBinaryMatrix::from_triplets(row, cols, std::move(entries));
}

inline BitVector bits(const std::string& s) {
    BitVector out;
    for (char ch : s) {
        out.push_back(ch == '1');
    }
    return out;
}

/// Each cell observed with probability `density`, observed cells are 1 with probability `p_one`.
inline ObservedBinaryMatrix random_matrix(Engine& rng, std::size_t m, std::size_t n, double density, double p_one) {
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (bernoulli(rng, density)) {
                entries.push_back(Triplet{i, j, static_cast<Bit>(bernoulli(rng, p_one))});
            }
        }
    }
    return ObservedBinaryMatrix::from_triplets(m, n, std::move(entries));
}

/// Mismatches of the tile u v^T against every observed cell, looked up cell by cell.
inline std::size_t dense_tile_error(const ObservedBinaryMatrix& m, const BitVector& u, const BitVector& v) {
    std::size_t err = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (auto a = m.at(i, j)) {
                err += *a != (u[i] & v[j]);
            }
        }
    }
    return err;
}

inline BitVector mask_bits(std::uint64_t mask, std::size_t len) {
    BitVector out(len);
    for (std::size_t k = 0; k < len; ++k) {
        out[k] = (mask >> k) & 1U;
    }
    return out;
}

struct BruteForce {
    std::size_t best_error = std::numeric_limits<std::size_t>::max();
    /// max over binary (u, v) of sum_{ones} (u_i + v_j)/2 - sum_{zeros} u_i v_j.
    double best_relaxed_objective = -1.0;
};

/**
 * Exhaustive search over all 2^(m+n) binary pairs. For binary u, v the best z
 * in the relaxation is u_i v_j, so the second quantity is the relaxation's
 * optimum whenever its optimal vertices are integral.
 */
inline BruteForce brute_force(const ObservedBinaryMatrix& m) {
    BruteForce out;
    const std::size_t total = m.rows() + m.cols();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
        const auto u = mask_bits(mask, m.rows());
        const auto v = mask_bits(mask >> m.rows(), m.cols());
        std::size_t err = 0;
        double obj = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const auto a = m.at(i, j);
                if (!a) {
                    continue;
                }
                const int p = u[i] & v[j];
                err += *a != p;
                obj += *a ? 0.5 * (u[i] + v[j]) : -static_cast<double>(p);
            }
        }
        out.best_error = std::min(out.best_error, err);
        out.best_relaxed_objective = std::max(out.best_relaxed_objective, obj);
    }
    return out;
}

inline Tiling single_tile(const BitVector& u, const BitVector& v) {
    Tiling t;
    t.rows = u.size();
    t.cols = v.size();
    t.tiles.push_back(Tile{u, v});
    return t;
}

}

#endif
