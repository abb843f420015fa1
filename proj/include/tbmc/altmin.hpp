#ifndef TBMC_ALTMIN_HPP
#define TBMC_ALTMIN_HPP

#include "binmat.hpp"
#include "error.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

/**
 * @file altmin.hpp
 * @brief Alternating minimisation of a rank-one tile under missing data.
 *
 * For fixed v the masked error is minimised by u_i = [(Wv)_i > 0], where
 * W_ij = 2A_ij - 1 on observed entries and 0 elsewhere; symmetrically for v.
 * Each half-step is an exact coordinate minimiser, so the error never rises.
 */

namespace tbmc {

/// Signed observation weights, held by row and by column.
struct WeightMatrix {
    struct Entry {
        std::uint32_t index;
        std::int8_t w;
    };

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr, col_ptr;
    std::vector<Entry> by_row, by_col;

    std::int8_t at(std::size_t i, std::size_t j) const {
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (by_row[k].index == j) {
                return by_row[k].w;
            }
        }
        return 0;
    }

    /// W v
    std::vector<std::int64_t> times(const BitVector& v) const {
        std::vector<std::int64_t> out(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                out[i] += v[by_row[k].index] ? by_row[k].w : 0;
            }
        }
        return out;
    }

    /// u^T W
    std::vector<std::int64_t> transpose_times(const BitVector& u) const {
        std::vector<std::int64_t> out(cols, 0);
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
                out[j] += u[by_col[k].index] ? by_col[k].w : 0;
            }
        }
        return out;
    }
};

inline WeightMatrix weight_matrix(const RowSubsetView& view) {
    WeightMatrix w;
    w.rows = view.rows();
    w.cols = view.cols();
    w.row_ptr.assign(w.rows + 1, 0);
    for (std::size_t i = 0; i < w.rows; ++i) {
        for (const auto& e : view.row(i)) {
            w.by_row.push_back({e.col, static_cast<std::int8_t>(e.bit ? 1 : -1)});
        }
        w.row_ptr[i + 1] = w.by_row.size();
    }
    const auto cols = local_columns(view);
    w.col_ptr = cols.ptr;
    w.by_col.reserve(cols.entries.size());
    for (const auto& e : cols.entries) {
        w.by_col.push_back({e.row, static_cast<std::int8_t>(e.bit ? 1 : -1)});
    }
    return w;
}

inline WeightMatrix weight_matrix(const ObservedBinaryMatrix& m) {
    return weight_matrix(RowSubsetView(m));
}

enum class SweepOrder { u_first, v_first };

struct AltMinOptions {
    std::size_t max_iter = 20;
    SweepOrder order = SweepOrder::u_first;
    /// Record the masked error after every half-step in `error_trace`.
    bool record_errors = false;
};

struct AltMinResult {
    Tile tile;
    std::size_t sweeps = 0;
    bool converged = false;
    /// An update produced the empty tile and was rejected.
    bool stopped_on_empty = false;
    std::vector<std::size_t> error_trace;
};

/**
 * Refines `start` by alternating exact half-steps until a full sweep changes
 * nothing or `max_iter` sweeps elapse (then `converged` is false). An update
 * that would empty the tile is rejected and ends the iteration.
 */
inline AltMinResult refine(const RowSubsetView& view, const Tile& start, const AltMinOptions& opts = {}) {
    if (start.u.size() != view.rows() || start.v.size() != view.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "start tile does not match view shape");
    }
    const auto w = weight_matrix(view);
    AltMinResult out;
    out.tile = start;
    if (opts.record_errors) {
        out.error_trace.push_back(tile_error(view, out.tile));
    }

    auto update_u = [&](BitVector& next) {
        const auto wv = w.times(out.tile.v);
        next.assign(view.rows(), 0);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = wv[i] > 0;
        }
    };
    auto update_v = [&](BitVector& next) {
        const auto wu = w.transpose_times(out.tile.u);
        next.assign(view.cols(), 0);
        for (std::size_t j = 0; j < next.size(); ++j) {
            next[j] = wu[j] > 0;
        }
    };

    BitVector next;
    for (std::size_t sweep = 0; sweep < opts.max_iter; ++sweep) {
        bool changed = false;
        for (int half = 0; half < 2; ++half) {
            const bool do_u = (half == 0) == (opts.order == SweepOrder::u_first);
            if (do_u) {
                update_u(next);
            } else {
                update_v(next);
            }
            if (count_ones(next) == 0) {
                out.stopped_on_empty = true;
                out.converged = !changed;
                out.sweeps = sweep + 1;
                return out;
            }
            BitVector& target = do_u ? out.tile.u : out.tile.v;
            if (next != target) {
                changed = true;
                target.swap(next);
            }
            if (opts.record_errors) {
                out.error_trace.push_back(tile_error(view, out.tile));
            }
        }
        out.sweeps = sweep + 1;
        if (!changed) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

inline AltMinResult refine(const ObservedBinaryMatrix& m, const Tile& start, const AltMinOptions& opts = {}) {
    return refine(RowSubsetView(m), start, opts);
}

}

#endif
