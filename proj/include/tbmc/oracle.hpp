#ifndef TBMC_ORACLE_HPP
#define TBMC_ORACLE_HPP

#include "binmat.hpp"
#include "error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

/**
 * @file oracle.hpp
 * @brief Exact best binary rank-one tile under missing data.
 *
 * With W_ij = 2A_ij - 1 on observed entries and 0 elsewhere, the objective
 * sum_{Omega1} u_i v_j - sum_{Omega0} u_i v_j equals u^T W v, and for a fixed
 * v the best u is u_i = [(Wv)_i > 0]. So the optimum is a maximisation of
 * sum_i max(0, (Wv)_i) over the shorter side only.
 *
 * Up to `enumeration_cap` free items that maximisation is done by plain Gray
 * code enumeration. Beyond it a depth-first branch-and-bound is used, with the
 * bound sum_r max(0, fixed_r + positive_free_r); it is exact whenever it
 * finishes within `node_budget`.
 */

namespace tbmc {

struct OracleResult {
    Tile tile;
    std::size_t error = 0;
    std::int64_t objective = 0;
    std::size_t nodes = 0;
    bool enumerated = true;
};

struct OracleOptions {
    std::size_t enumeration_cap = 20;
    bool branch_and_bound = true;
    std::size_t node_budget = 50'000'000;
};

namespace detail {

/// Dense signed weights between the branching side and the response side.
struct OracleWeights {
    bool branch_on_columns = true;
    std::vector<std::size_t> branch_items;    // original ids on the branching side
    std::vector<std::size_t> response_items;  // original ids on the response side
    std::vector<std::int8_t> w;              // branch-major, branch_items x response_items

    std::size_t p() const { return branch_items.size(); }
    std::size_t q() const { return response_items.size(); }
    const std::int8_t* row(std::size_t k) const { return w.data() + k * q(); }
};

inline OracleWeights oracle_weights(const RowSubsetView& view) {
    std::vector<std::size_t> row_id(view.rows(), 0), col_id(view.cols(), 0);
    std::vector<std::uint8_t> row_active(view.rows(), 0), col_active(view.cols(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            row_active[i] = 1;
            col_active[e.col] = 1;
        }
    }
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < view.rows(); ++i) {
        if (row_active[i]) {
            row_id[i] = rows.size();
            rows.push_back(i);
        }
    }
    for (std::size_t j = 0; j < view.cols(); ++j) {
        if (col_active[j]) {
            col_id[j] = cols.size();
            cols.push_back(j);
        }
    }

    OracleWeights out;
    out.branch_on_columns = cols.size() <= rows.size();
    out.branch_items = out.branch_on_columns ? cols : rows;
    out.response_items = out.branch_on_columns ? rows : cols;
    out.w.assign(out.p() * out.q(), 0);
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            const std::int8_t sign = e.bit ? 1 : -1;
            const std::size_t r = row_id[i], c = col_id[e.col];
            if (out.branch_on_columns) {
                out.w[c * out.q() + r] = sign;
            } else {
                out.w[r * out.q() + c] = sign;
            }
        }
    }
    return out;
}

inline std::int64_t response_value(const std::vector<std::int64_t>& acc) {
    std::int64_t total = 0;
    for (auto a : acc) {
        total += std::max<std::int64_t>(0, a);
    }
    return total;
}

/// Expands a branching assignment to a full tile (response uses strict ">").
inline Tile assemble_tile(const RowSubsetView& view, const OracleWeights& ow, const std::vector<std::uint8_t>& x) {
    std::vector<std::int64_t> acc(ow.q(), 0);
    for (std::size_t k = 0; k < ow.p(); ++k) {
        if (x[k]) {
            const auto* wk = ow.row(k);
            for (std::size_t r = 0; r < ow.q(); ++r) {
                acc[r] += wk[r];
            }
        }
    }
    Tile t;
    t.u.assign(view.rows(), 0);
    t.v.assign(view.cols(), 0);
    BitVector& branch = ow.branch_on_columns ? t.v : t.u;
    BitVector& response = ow.branch_on_columns ? t.u : t.v;
    for (std::size_t k = 0; k < ow.p(); ++k) {
        branch[ow.branch_items[k]] = x[k];
    }
    for (std::size_t r = 0; r < ow.q(); ++r) {
        response[ow.response_items[r]] = acc[r] > 0;
    }
    return t;
}

/// (v, u) lexicographic order used to break ties between optimal tiles.
inline bool lex_less(const Tile& a, const Tile& b) {
    if (a.v != b.v) {
        return a.v < b.v;
    }
    return a.u < b.u;
}

inline void enumerate(const RowSubsetView& view, const OracleWeights& ow, OracleResult& out) {
    const std::size_t p = ow.p(), q = ow.q();
    std::vector<std::int64_t> acc(q, 0);
    std::vector<std::uint8_t> x(p, 0);

    std::int64_t best = 0;
    Tile best_tile = assemble_tile(view, ow, x);
    const std::uint64_t total = std::uint64_t{1} << p;
    for (std::uint64_t step = 1; step < total; ++step) {
        // Gray code: flip the lowest set bit position of `step`.
        const auto k = static_cast<std::size_t>(__builtin_ctzll(step));
        x[k] ^= 1;
        const auto* wk = ow.row(k);
        if (x[k]) {
            for (std::size_t r = 0; r < q; ++r) {
                acc[r] += wk[r];
            }
        } else {
            for (std::size_t r = 0; r < q; ++r) {
                acc[r] -= wk[r];
            }
        }
        const std::int64_t value = response_value(acc);
        if (value > best) {
            best = value;
            best_tile = assemble_tile(view, ow, x);
        } else if (value == best) {
            Tile candidate = assemble_tile(view, ow, x);
            if (lex_less(candidate, best_tile)) {
                best_tile = std::move(candidate);
            }
        }
    }
    out.objective = best;
    out.tile = std::move(best_tile);
    out.nodes = total;
    out.enumerated = true;
}

class BranchAndBound {
public:
    BranchAndBound(const OracleWeights& ow, std::size_t budget) : ow_(ow), budget_(budget) {
        const std::size_t p = ow.p(), q = ow.q();
        acc_.assign(q, 0);
        pos_.assign(q, 0);
        for (std::size_t k = 0; k < p; ++k) {
            const auto* wk = ow.row(k);
            for (std::size_t r = 0; r < q; ++r) {
                pos_[r] += std::max<std::int8_t>(0, wk[r]);
            }
        }
        order_.resize(p);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::vector<std::int64_t> weight(p, 0);
        for (std::size_t k = 0; k < p; ++k) {
            const auto* wk = ow.row(k);
            for (std::size_t r = 0; r < q; ++r) {
                weight[k] += wk[r] != 0;
            }
        }
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
        x_.assign(p, 0);
        hint_ = local_search();
        best_x_ = hint_;
        best_ = value_of(hint_);
    }

    std::int64_t run() {
        search(0);
        return best_;
    }

    const std::vector<std::uint8_t>& best_assignment() const { return best_x_; }
    std::size_t nodes() const { return nodes_; }

private:
    std::int64_t value_of(const std::vector<std::uint8_t>& x) const {
        std::vector<std::int64_t> acc(ow_.q(), 0);
        for (std::size_t k = 0; k < ow_.p(); ++k) {
            if (x[k]) {
                const auto* wk = ow_.row(k);
                for (std::size_t r = 0; r < ow_.q(); ++r) {
                    acc[r] += wk[r];
                }
            }
        }
        return response_value(acc);
    }

    // Alternating closed-form responses from a majority start, for an initial bound.
    std::vector<std::uint8_t> local_search() const {
        const std::size_t p = ow_.p(), q = ow_.q();
        std::vector<std::uint8_t> x(p, 0);
        for (std::size_t k = 0; k < p; ++k) {
            std::int64_t s = 0;
            const auto* wk = ow_.row(k);
            for (std::size_t r = 0; r < q; ++r) {
                s += wk[r];
            }
            x[k] = s > 0;
        }
        for (int sweep = 0; sweep < 50; ++sweep) {
            std::vector<std::int64_t> acc(q, 0);
            for (std::size_t k = 0; k < p; ++k) {
                if (x[k]) {
                    const auto* wk = ow_.row(k);
                    for (std::size_t r = 0; r < q; ++r) {
                        acc[r] += wk[r];
                    }
                }
            }
            std::vector<std::uint8_t> next(p, 0);
            for (std::size_t k = 0; k < p; ++k) {
                std::int64_t s = 0;
                const auto* wk = ow_.row(k);
                for (std::size_t r = 0; r < q; ++r) {
                    s += acc[r] > 0 ? wk[r] : 0;
                }
                next[k] = s > 0;
            }
            if (next == x) {
                break;
            }
            x = std::move(next);
        }
        return x;
    }

    void search(std::size_t depth) {
        if (++nodes_ > budget_) {
            throw Error(ErrorCode::TooLarge, "exact rank-one search exceeded " + std::to_string(budget_) + " nodes");
        }
        std::int64_t bound = 0, current = 0;
        for (std::size_t r = 0; r < acc_.size(); ++r) {
            bound += std::max<std::int64_t>(0, acc_[r] + pos_[r]);
            current += std::max<std::int64_t>(0, acc_[r]);
        }
        if (current > best_) {
            best_ = current;
            best_x_ = x_;
        }
        if (bound <= best_ || depth == order_.size()) {
            return;
        }
        const std::size_t k = order_[depth];
        const auto* wk = ow_.row(k);
        const std::size_t q = acc_.size();
        for (std::size_t r = 0; r < q; ++r) {
            pos_[r] -= std::max<std::int8_t>(0, wk[r]);
        }
        const std::uint8_t first = hint_[k];
        for (int pass = 0; pass < 2; ++pass) {
            const std::uint8_t value = pass == 0 ? first : std::uint8_t(1 - first);
            if (value) {
                for (std::size_t r = 0; r < q; ++r) {
                    acc_[r] += wk[r];
                }
            }
            x_[k] = value;
            search(depth + 1);
            x_[k] = 0;
            if (value) {
                for (std::size_t r = 0; r < q; ++r) {
                    acc_[r] -= wk[r];
                }
            }
        }
        for (std::size_t r = 0; r < q; ++r) {
            pos_[r] += std::max<std::int8_t>(0, wk[r]);
        }
    }

    const OracleWeights& ow_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    std::vector<std::int64_t> acc_, pos_;
    std::vector<std::size_t> order_;
    std::vector<std::uint8_t> x_, hint_, best_x_;
    std::int64_t best_ = 0;
};

}

/**
 * Optimal tile and masked error of the best binary rank-one approximation.
 *
 * When the enumeration path is taken, ties are broken toward the
 * lexicographically smallest v, then the smallest u. Throws `TooLarge` if the
 * shorter active side exceeds `enumeration_cap` and branch-and-bound is
 * disabled or runs out of budget.
 */
inline OracleResult exact_rank1(const RowSubsetView& view, const OracleOptions& opts = {}) {
    const auto ow = detail::oracle_weights(view);
    OracleResult out;
    if (ow.p() <= opts.enumeration_cap) {
        detail::enumerate(view, ow, out);
    } else {
        if (!opts.branch_and_bound) {
            throw Error(ErrorCode::TooLarge, "shorter side has " + std::to_string(ow.p()) +
                                                 " observed lines, cap is " + std::to_string(opts.enumeration_cap));
        }
        detail::BranchAndBound bb(ow, opts.node_budget);
        out.objective = bb.run();
        out.tile = detail::assemble_tile(view, ow, bb.best_assignment());
        out.nodes = bb.nodes();
        out.enumerated = false;
    }
    std::size_t ones = 0;
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (const auto& e : view.row(i)) {
            ones += e.bit;
        }
    }
    out.error = ones - static_cast<std::size_t>(out.objective);
    return out;
}

inline OracleResult exact_rank1(const ObservedBinaryMatrix& m, const OracleOptions& opts = {}) {
    return exact_rank1(RowSubsetView(m), opts);
}

/// Ratio of a tile's masked error to the optimum, given the optimal error.
inline double ratio_from_errors(std::size_t error, std::size_t optimal_error) {
    if (optimal_error == 0) {
        return error == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(error) / static_cast<double>(optimal_error);
}

/**
 * Approximation ratio R of `tile` on `view`. When the optimum is exact (error
 * 0) the ratio is 1 for an exact tile and +infinity otherwise.
 */
inline double approx_ratio(const RowSubsetView& view, const Tile& tile, const OracleOptions& opts = {}) {
    const auto best = exact_rank1(view, opts);
    return ratio_from_errors(tile_error(view, tile), best.error);
}

inline double approx_ratio(const ObservedBinaryMatrix& m, const Tile& tile, const OracleOptions& opts = {}) {
    return approx_ratio(RowSubsetView(m), tile, opts);
}

}

#endif
