#ifndef TBMC_TILING_HPP
#define TBMC_TILING_HPP

#include "binmat.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tbmc {

/**
 * @brief Binary factors U (rows x k) and V (cols x k), stored tile by tile.
 *
 * Each tile's `u` is indexed by original row id. Tilings produced by the
 * partitioning driver have pairwise-disjoint row supports, so U V^T is 0/1.
 */
struct Tiling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Tile> tiles;

    bool operator==(const Tiling&) const = default;
};

/// True when no row is claimed by two tiles and all factor lengths match.
inline bool is_row_partition(const Tiling& t) {
    std::vector<Bit> seen(t.rows, 0);
    for (const auto& tile : t.tiles) {
        if (tile.u.size() != t.rows || tile.v.size() != t.cols) {
            return false;
        }
        for (std::size_t i = 0; i < t.rows; ++i) {
            if (tile.u[i]) {
                if (seen[i]) {
                    return false;
                }
                seen[i] = 1;
            }
        }
    }
    return true;
}

inline Bit predict(const Tiling& t, std::size_t i, std::size_t j) {
    if (i >= t.rows || j >= t.cols) {
        throw Error(ErrorCode::IndexOutOfRange, "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    for (const auto& tile : t.tiles) {
        if (tile.u[i] && tile.v[j]) {
            return 1;
        }
    }
    return 0;
}

/**
 * Dense per-row lookup for batch prediction: for each row, the `v` of the tile
 * covering it, or nullptr. Assumes a row partition.
 */
class TilingPredictor {
public:
    explicit TilingPredictor(const Tiling& t) : tiling_(&t), owner_(t.rows, nullptr) {
        for (const auto& tile : t.tiles) {
            for (std::size_t i = 0; i < t.rows; ++i) {
                if (tile.u[i] && owner_[i] == nullptr) {
                    owner_[i] = &tile.v;
                }
            }
        }
    }

    Bit operator()(std::size_t i, std::size_t j) const {
        if (i >= tiling_->rows || j >= tiling_->cols) {
            throw Error(ErrorCode::IndexOutOfRange, "(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        return owner_[i] ? (*owner_[i])[j] : Bit{0};
    }

private:
    const Tiling* tiling_;
    std::vector<const BitVector*> owner_;
};

/// Number of observed entries of `m` that the tiling mispredicts.
inline std::size_t masked_error(const ObservedBinaryMatrix& m, const Tiling& t) {
    if (t.rows != m.rows() || t.cols != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "tiling is " + std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                                                      ", matrix is " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()));
    }
    for (const auto& tile : t.tiles) {
        if (tile.u.size() != t.rows || tile.v.size() != t.cols) {
            throw Error(ErrorCode::DimensionMismatch, "tile factor length");
        }
    }
    std::size_t err = 0;
    if (is_row_partition(t)) {
        TilingPredictor p(t);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (const auto& e : m.row(i)) {
                err += (p(i, e.col) != e.bit);
            }
        }
    } else {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (const auto& e : m.row(i)) {
                err += (predict(t, i, e.col) != e.bit);
            }
        }
    }
    return err;
}

}

#endif
