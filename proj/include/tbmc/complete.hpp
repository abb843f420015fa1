#ifndef TBMC_COMPLETE_HPP
#define TBMC_COMPLETE_HPP

#include "altmin.hpp"
#include "binmat.hpp"
#include "error.hpp"
#include "heuristics.hpp"
#include "lp_rank1.hpp"
#include "random.hpp"
#include "tiling.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file complete.hpp
 * @brief Recursive row partitioning into tiles for binary matrix completion.
 */

namespace tbmc {

enum class Rank1Method { lp, average, partition };

inline const char* to_string(Rank1Method m) {
    switch (m) {
        case Rank1Method::lp: return "lp";
        case Rank1Method::average: return "average";
        case Rank1Method::partition: return "partition";
    }
    return "unknown";
}

inline std::optional<Rank1Method> parse_rank1_method(std::string_view name) {
    if (name == "lp") {
        return Rank1Method::lp;
    }
    if (name == "average") {
        return Rank1Method::average;
    }
    if (name == "partition") {
        return Rank1Method::partition;
    }
    return std::nullopt;
}

struct TbmcConfig {
    double tolerance = 0.05;
    /// Maximum number of accepted tiles; 0 means min(rows, 256).
    std::size_t k_max = 0;
    Rank1Method method = Rank1Method::lp;
    bool use_am = false;
    std::size_t am_max_iter = 20;
    std::uint64_t seed = 0;
    LpOptions lp;
};

inline void validate(const TbmcConfig& cfg) {
    if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "tolerance must lie in (0, 1)");
    }
    if (cfg.am_max_iter == 0) {
        throw Error(ErrorCode::ConfigInvalid, "am_max_iter must be positive");
    }
}

inline std::size_t effective_k_max(const TbmcConfig& cfg, std::size_t rows) {
    return cfg.k_max != 0 ? cfg.k_max : std::max<std::size_t>(1, std::min<std::size_t>(rows, 256));
}

/// One rank-one step: the tile plus LP diagnostics when the LP was used.
struct Rank1Step {
    Tile tile;
    std::optional<Rank1Solution> lp;
    std::size_t am_sweeps = 0;
};

inline Rank1Step rank_one(const RowSubsetView& view, Rank1Method method, std::uint64_t seed,
                          const LpOptions& lp = {}, bool use_am = false, std::size_t am_max_iter = 20) {
    Rank1Step out;
    switch (method) {
        case Rank1Method::lp:
            out.lp = lp_rank1(view, lp);
            out.tile = out.lp->tile;
            break;
        case Rank1Method::average:
            out.tile = average_rank1(view);
            break;
        case Rank1Method::partition:
            out.tile = partition_rank1(view, seed);
            break;
    }
    if (use_am) {
        AltMinOptions opts;
        opts.max_iter = am_max_iter;
        auto refined = refine(view, out.tile, opts);
        out.tile = std::move(refined.tile);
        out.am_sweeps = refined.sweeps;
    }
    return out;
}

enum class AcceptReason { tolerance_met, u_all_ones, leaf };

inline const char* to_string(AcceptReason r) {
    switch (r) {
        case AcceptReason::tolerance_met: return "tolerance-met";
        case AcceptReason::u_all_ones: return "u-all-ones";
        case AcceptReason::leaf: return "leaf";
    }
    return "unknown";
}

struct AcceptedTile {
    AcceptReason reason;
    std::size_t rows;
    std::size_t cols;
    /// Largest scaled Hamming distance from v among the tile's observed rows.
    double max_distance;
};

struct TilingReport {
    std::size_t tiles_found = 0;
    std::size_t train_error = 0;
    std::vector<AcceptedTile> tiles;
    std::size_t iterations = 0;
    std::size_t max_queue = 0;
    /// Branches closed because the rank-one step returned u = 0.
    std::size_t empty_branches = 0;
    std::size_t uncovered_rows = 0;
    bool stopped_at_k_max = false;
    double max_integrality_gap = 0;
};

struct TbmcResult {
    Tiling tiling;
    TilingReport report;
};

/**
 * Tiles `m` by recursive row partitioning.
 *
 * A LIFO work list starts with every row. Each popped submatrix B gets a
 * rank-one pair (u, v); u = 0 closes the branch. Otherwise rows with u_i = 0
 * are pushed back as B0, and the rows with u_i = 1 (B1) are accepted as a
 * tile when every observed row of B1 is within scaled Hamming distance
 * `tolerance` of v, or when u covers all of B. A B1 that fails both tests is
 * pushed after B0, so it is split again next. Stops when the list is empty or
 * `k_max` tiles have been accepted.
 */
inline TbmcResult complete(const ObservedBinaryMatrix& m, const TbmcConfig& cfg) {
    validate(cfg);
    const std::size_t k_max = effective_k_max(cfg, m.rows());

    TbmcResult out;
    out.tiling.rows = m.rows();
    out.tiling.cols = m.cols();

    std::vector<std::vector<std::size_t>> work;
    {
        std::vector<std::size_t> all(m.rows());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        if (!all.empty()) {
            work.push_back(std::move(all));
        }
    }

    auto& report = out.report;
    std::size_t calls = 0;
    while (!work.empty() && report.tiles_found < k_max) {
        report.max_queue = std::max(report.max_queue, work.size());
        RowSubsetView b(m, std::move(work.back()));
        work.pop_back();
        ++report.iterations;

        auto step = rank_one(b, cfg.method, derive_seed(cfg.seed, 0x7b1c, calls++), cfg.lp, cfg.use_am, cfg.am_max_iter);
        if (step.lp) {
            report.max_integrality_gap = std::max(report.max_integrality_gap, step.lp->max_integrality_gap);
        }
        const Tile& tile = step.tile;
        if (count_ones(tile.u) == 0) {
            ++report.empty_branches;
            report.uncovered_rows += b.rows();
            continue;
        }

        auto [b1, b0] = split_rows(b, tile.u);
        if (!b0.empty()) {
            work.push_back(b0.parent_rows());
        }

        double worst = 0.0;
        for (std::size_t i = 0; i < b1.rows(); ++i) {
            if (!b1.row(i).empty()) {
                worst = std::max(worst, scaled_hamming(b1, i, tile.v));
            }
        }
        const bool within = worst < cfg.tolerance;
        const bool all_ones = b0.empty();
        if (within || all_ones) {
            Tile global;
            global.u.assign(m.rows(), 0);
            for (auto r : b1.parent_rows()) {
                global.u[r] = 1;
            }
            global.v = tile.v;
            out.tiling.tiles.push_back(std::move(global));
            AcceptReason reason = within ? AcceptReason::tolerance_met
                                         : (b.rows() == 1 ? AcceptReason::leaf : AcceptReason::u_all_ones);
            report.tiles.push_back(AcceptedTile{reason, b1.rows(), count_ones(tile.v), worst});
            ++report.tiles_found;
        } else {
            work.push_back(b1.parent_rows());
        }
    }

    report.stopped_at_k_max = !work.empty();
    for (const auto& rows : work) {
        report.uncovered_rows += rows.size();
    }
    report.train_error = masked_error(m, out.tiling);
    return out;
}

}

#endif
