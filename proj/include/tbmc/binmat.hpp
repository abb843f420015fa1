#ifndef TBMC_BINMAT_HPP
#define TBMC_BINMAT_HPP

#include "error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

/**
 * @file binmat.hpp
 * @brief Sparse storage for a partially observed binary matrix, row-subset views
 * and the per-row distance used by the partitioning driver.
 */

namespace tbmc {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

struct Triplet {
    std::size_t row;
    std::size_t col;
    Bit bit;

    bool operator==(const Triplet&) const = default;
};

struct RowEntry {
    std::uint32_t col;
    Bit bit;
};

struct ColEntry {
    std::uint32_t row;
    Bit bit;
};

/**
 * @brief A rank-one binary pair; `u` indexes the rows of whatever matrix or
 * view it was computed on, `v` always spans every column.
 */
struct Tile {
    BitVector u;
    BitVector v;

    bool operator==(const Tile&) const = default;

    bool empty() const {
        return std::none_of(u.begin(), u.end(), [](Bit b) { return b != 0; }) ||
               std::none_of(v.begin(), v.end(), [](Bit b) { return b != 0; });
    }
};

inline std::size_t count_ones(const BitVector& x) {
    return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](Bit b) { return b != 0; }));
}

/**
 * @brief Immutable sparse binary matrix with an observation mask.
 *
 * Observed entries are held twice, compressed by row and by column, each
 * sorted by the minor index. Iterating rows in order therefore visits the
 * entries in (row, col) order, which every downstream solver relies on for
 * deterministic output.
 */
class ObservedBinaryMatrix {
public:
    ObservedBinaryMatrix() : row_ptr_(1, 0), col_ptr_(1, 0) {}

    /**
     * Throws `IndexOutOfRange` for an index outside the declared shape,
     * `ValueOutOfDomain` for a bit other than 0/1 and `DuplicateEntry` when a
     * position is listed twice.
     */
    static ObservedBinaryMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
        for (const auto& t : triplets) {
            if (t.row >= rows || t.col >= cols) {
                throw Error(ErrorCode::IndexOutOfRange,
                            "entry (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") outside " +
                                std::to_string(rows) + "x" + std::to_string(cols));
            }
            if (t.bit > 1) {
                throw Error(ErrorCode::ValueOutOfDomain, "entry value " + std::to_string(int(t.bit)) + " is not binary");
            }
        }
        std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        for (std::size_t k = 1; k < triplets.size(); ++k) {
            if (triplets[k].row == triplets[k - 1].row && triplets[k].col == triplets[k - 1].col) {
                throw Error(ErrorCode::DuplicateEntry,
                            "(" + std::to_string(triplets[k].row) + "," + std::to_string(triplets[k].col) + ")");
            }
        }

        ObservedBinaryMatrix out;
        out.n_rows_ = rows;
        out.n_cols_ = cols;
        out.row_ptr_.assign(rows + 1, 0);
        out.col_ptr_.assign(cols + 1, 0);
        out.row_entries_.reserve(triplets.size());
        for (const auto& t : triplets) {
            ++out.row_ptr_[t.row + 1];
            ++out.col_ptr_[t.col + 1];
            out.row_entries_.push_back(RowEntry{static_cast<std::uint32_t>(t.col), t.bit});
            out.n_ones_ += t.bit;
        }
        std::partial_sum(out.row_ptr_.begin(), out.row_ptr_.end(), out.row_ptr_.begin());
        std::partial_sum(out.col_ptr_.begin(), out.col_ptr_.end(), out.col_ptr_.begin());

        out.col_entries_.resize(triplets.size());
        std::vector<std::size_t> fill(out.col_ptr_.begin(), out.col_ptr_.end() - 1);
        for (const auto& t : triplets) {
            out.col_entries_[fill[t.col]++] = ColEntry{static_cast<std::uint32_t>(t.row), t.bit};
        }
        return out;
    }

    std::size_t rows() const { return n_rows_; }
    std::size_t cols() const { return n_cols_; }
    std::size_t observed() const { return row_entries_.size(); }
    std::size_t ones() const { return n_ones_; }

    std::span<const RowEntry> row(std::size_t i) const {
        return {row_entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }

    std::span<const ColEntry> col(std::size_t j) const {
        return {col_entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
    }

    /// Observed value at (i, j), or nothing if the position is missing.
    std::optional<Bit> at(std::size_t i, std::size_t j) const {
        auto r = row(i);
        auto it = std::lower_bound(r.begin(), r.end(), j, [](const RowEntry& e, std::size_t c) { return e.col < c; });
        if (it != r.end() && it->col == j) {
            return it->bit;
        }
        return std::nullopt;
    }

    /// All observed entries in (row, col) order.
    std::vector<Triplet> triplets() const {
        std::vector<Triplet> out;
        out.reserve(observed());
        for (std::size_t i = 0; i < n_rows_; ++i) {
            for (const auto& e : row(i)) {
                out.push_back(Triplet{i, e.col, e.bit});
            }
        }
        return out;
    }

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t n_ones_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<RowEntry> row_entries_;
    std::vector<std::size_t> col_ptr_;
    std::vector<ColEntry> col_entries_;
};

/**
 * @brief An ordered subset of a parent matrix's rows, with all of its columns.
 *
 * Only row ids are stored; entry data stays in the parent, which must outlive
 * the view.
 */
class RowSubsetView {
public:
    RowSubsetView(const ObservedBinaryMatrix& parent, std::vector<std::size_t> rows)
        : parent_(&parent), rows_(std::move(rows)) {
        for (auto r : rows_) {
            if (r >= parent.rows()) {
                throw Error(ErrorCode::IndexOutOfRange, "view row " + std::to_string(r));
            }
        }
    }

    /// View over every row of `parent`.
    explicit RowSubsetView(const ObservedBinaryMatrix& parent) : parent_(&parent), rows_(parent.rows()) {
        std::iota(rows_.begin(), rows_.end(), std::size_t{0});
    }

    const ObservedBinaryMatrix& parent() const { return *parent_; }
    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return parent_->cols(); }
    bool empty() const { return rows_.empty(); }

    std::size_t parent_row(std::size_t local) const { return rows_[local]; }
    const std::vector<std::size_t>& parent_rows() const { return rows_; }

    std::span<const RowEntry> row(std::size_t local) const { return parent_->row(rows_[local]); }

    std::size_t observed() const {
        std::size_t total = 0;
        for (auto r : rows_) {
            total += parent_->row(r).size();
        }
        return total;
    }

private:
    const ObservedBinaryMatrix* parent_;
    std::vector<std::size_t> rows_;
};

/**
 * Column-major index of the entries inside a view, with local row ids.
 * Built on demand by the solvers that need column access.
 */
struct LocalColumns {
    std::vector<std::size_t> ptr;
    std::vector<ColEntry> entries;

    std::span<const ColEntry> col(std::size_t j) const { return {entries.data() + ptr[j], ptr[j + 1] - ptr[j]}; }
};

inline LocalColumns local_columns(const RowSubsetView& view) {
    LocalColumns out;
    out.ptr.assign(view.cols() + 1, 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            ++out.ptr[e.col + 1];
        }
    }
    std::partial_sum(out.ptr.begin(), out.ptr.end(), out.ptr.begin());
    out.entries.resize(out.ptr.back());
    std::vector<std::size_t> fill(out.ptr.begin(), out.ptr.end() - 1);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            out.entries[fill[e.col]++] = ColEntry{static_cast<std::uint32_t>(i), e.bit};
        }
    }
    return out;
}

/**
 * Fraction of the observed entries of local row `i` that disagree with `v`.
 * Throws `EmptyRow` when the row has no observed entries.
 */
inline double scaled_hamming(const RowSubsetView& view, std::size_t i, const BitVector& v) {
    if (v.size() != view.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "pattern length " + std::to_string(v.size()));
    }
    auto r = view.row(i);
    if (r.empty()) {
        throw Error(ErrorCode::EmptyRow, "row " + std::to_string(view.parent_row(i)) + " has no observed entries");
    }
    std::size_t mismatches = 0;
    for (const auto& e : r) {
        mismatches += (v[e.col] != e.bit);
    }
    return static_cast<double>(mismatches) / static_cast<double>(r.size());
}

inline double scaled_hamming(const ObservedBinaryMatrix& m, std::size_t i, const BitVector& v) {
    return scaled_hamming(RowSubsetView(m, {i}), 0, v);
}

/**
 * Split a view by a row indicator: rows with `u[i] = 1` go to the first view,
 * the rest to the second, both in their original order.
 */
inline std::pair<RowSubsetView, RowSubsetView> split_rows(const RowSubsetView& view, const BitVector& u) {
    if (u.size() != view.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "row indicator length " + std::to_string(u.size()));
    }
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        (u[i] ? in : out).push_back(view.parent_row(i));
    }
    return {RowSubsetView(view.parent(), std::move(in)), RowSubsetView(view.parent(), std::move(out))};
}

/// Squared masked error of a single tile on a view: mismatches over observed entries.
inline std::size_t tile_error(const RowSubsetView& view, const Tile& tile) {
    if (tile.u.size() != view.rows() || tile.v.size() != view.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "tile does not match view shape");
    }
    std::size_t err = 0;
    for (std::size_t i = 0; i < view.rows(); ++i) {
        if (tile.u[i]) {
            for (const auto& e : view.row(i)) {
                err += (e.bit != tile.v[e.col]);
            }
        } else {
            for (const auto& e : view.row(i)) {
                err += e.bit;
            }
        }
    }
    return err;
}

inline std::size_t tile_error(const ObservedBinaryMatrix& m, const Tile& tile) {
    return tile_error(RowSubsetView(m), tile);
}

}

#endif
