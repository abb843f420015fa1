#ifndef TBMC_HEURISTICS_HPP
#define TBMC_HEURISTICS_HPP

#include "binmat.hpp"
#include "random.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

/**
 * @file heuristics.hpp
 * @brief Cheap rank-one baselines with the same shape of output as the LP.
 */

namespace tbmc {

/**
 * Majority pattern: v_j = 1 when strictly more than half of column j's
 * observed entries are ones, then u_i = 1 for every row with an observed one
 * inside that pattern. All fractions are over observed entries only.
 */
inline Tile average_rank1(const RowSubsetView& view) {
    std::vector<std::size_t> ones(view.cols(), 0), seen(view.cols(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            ++seen[e.col];
            ones[e.col] += e.bit;
        }
    }
    Tile t;
    t.v.assign(view.cols(), 0);
    for (std::size_t j = 0; j < view.cols(); ++j) {
        t.v[j] = 2 * ones[j] > seen[j];
    }
    t.u.assign(view.rows(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            if (e.bit && t.v[e.col]) {
                t.u[i] = 1;
                break;
            }
        }
    }
    return t;
}

/**
 * Random-column seed: picks a column with at least one observed one, takes
 * its observed ones as u, then sets v_j = 1 where the observed mean over
 * those rows is at least one half. Returns the empty tile when no column
 * holds an observed one.
 */
inline Tile partition_rank1(const RowSubsetView& view, std::uint64_t seed) {
    Tile t;
    t.u.assign(view.rows(), 0);
    t.v.assign(view.cols(), 0);

    std::vector<std::uint8_t> has_one(view.cols(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            has_one[e.col] |= e.bit;
        }
    }
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < view.cols(); ++j) {
        if (has_one[j]) {
            candidates.push_back(j);
        }
    }
    if (candidates.empty()) {
        return t;
    }
    Engine rng(seed);
    const std::size_t pick = candidates[uniform_below(rng, candidates.size())];

    std::vector<std::size_t> ones(view.cols(), 0), seen(view.cols(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        bool selected = false;
        for (const auto& e : view.row(i)) {
            if (e.col == pick) {
                selected = e.bit != 0;
                break;
            }
        }
        if (!selected) {
            continue;
        }
        t.u[i] = 1;
        for (const auto& e : view.row(i)) {
            ++seen[e.col];
            ones[e.col] += e.bit;
        }
    }
    for (std::size_t j = 0; j < view.cols(); ++j) {
        t.v[j] = seen[j] > 0 && 2 * ones[j] >= seen[j];
    }
    return t;
}

inline Tile average_rank1(const ObservedBinaryMatrix& m) {
    return average_rank1(RowSubsetView(m));
}

inline Tile partition_rank1(const ObservedBinaryMatrix& m, std::uint64_t seed) {
    return partition_rank1(RowSubsetView(m), seed);
}

}

#endif
