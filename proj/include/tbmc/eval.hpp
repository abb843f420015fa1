#ifndef TBMC_EVAL_HPP
#define TBMC_EVAL_HPP

#include "binmat.hpp"
#include "complete.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "synth.hpp"
#include "tiling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

/**
 * @file eval.hpp
 * @brief Experiment harness: train/test splits, approximation-ratio trials,
 * recovery phase grids and held-out error reports.
 *
 * Every experiment derives per-job seeds from one master seed, runs jobs on a
 * small worker pool and writes results into per-job slots, so the output does
 * not depend on the number of workers or on scheduling.
 */

namespace tbmc {

// Stream ids for derive_seed; distinct so that experiments never share draws.
namespace seed_stream {
inline constexpr std::uint64_t ratio_instance = 0x1001;
inline constexpr std::uint64_t ratio_method = 0x1002;
inline constexpr std::uint64_t phase_instance = 0x2001;
inline constexpr std::uint64_t eval_split = 0x3001;
inline constexpr std::uint64_t eval_method = 0x3002;
}

/**
 * Runs fn(0) .. fn(count - 1) on up to `jobs` threads (0 = hardware
 * concurrency). If any call throws, the exception of the lowest failing index
 * is rethrown after all workers stop.
 */
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex guard;
    std::size_t failed_index = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// ---------------------------------------------------------------- splitting

struct SplitPair {
    ObservedBinaryMatrix train;
    std::vector<Triplet> test;
    std::uint64_t seed = 0;
};

/// Sends each observed entry to the training side with probability `rho`.
inline SplitPair split(const ObservedBinaryMatrix& m, double rho, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "split fraction must lie strictly inside (0, 1)");
    }
    Engine rng(seed);
    std::vector<Triplet> train;
    SplitPair out;
    out.seed = seed;
    train.reserve(static_cast<std::size_t>(rho * static_cast<double>(m.observed())) + 16);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (const auto& e : m.row(i)) {
            Triplet t{i, e.col, e.bit};
            if (bernoulli(rng, rho)) {
                train.push_back(t);
            } else {
                out.test.push_back(t);
            }
        }
    }
    out.train = ObservedBinaryMatrix::from_triplets(m.rows(), m.cols(), std::move(train));
    return out;
}

/// Percentage of `test` entries the tiling mispredicts.
inline double proportional_error(const Tiling& t, const std::vector<Triplet>& test) {
    if (test.empty()) {
        throw Error(ErrorCode::EmptyTestSet, "no held-out entries");
    }
    std::size_t wrong = 0;
    if (is_row_partition(t)) {
        TilingPredictor p(t);
        for (const auto& e : test) {
            wrong += p(e.row, e.col) != e.bit;
        }
    } else {
        for (const auto& e : test) {
            wrong += predict(t, e.row, e.col) != e.bit;
        }
    }
    return 100.0 * static_cast<double>(wrong) / static_cast<double>(test.size());
}

// ---------------------------------------------------------- formatting

/// Fixed, locale-independent rendering used by every CSV writer.
inline std::string format_number(double x, int digits = 6) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// ------------------------------------------------------- ratio experiment

struct MethodVariant {
    Rank1Method method;
    bool am;
};

/// Each method without AM, followed by its AM variant when `with_am` is set.
inline std::vector<MethodVariant> expand_variants(const std::vector<Rank1Method>& methods, bool with_am) {
    std::vector<MethodVariant> out;
    for (auto m : methods) {
        out.push_back({m, false});
        if (with_am) {
            out.push_back({m, true});
        }
    }
    return out;
}

struct RatioTrial {
    std::size_t trial = 0;
    Rank1Method method = Rank1Method::lp;
    bool am = false;
    double R = 1.0;
    std::size_t error = 0;
    std::size_t oracle_error = 0;
    double integrality_gap = 0.0;
};

struct RatioStats {
    Rank1Method method = Rank1Method::lp;
    bool am = false;
    std::size_t trials = 0;
    std::size_t finite = 0;
    /// Trials where the oracle error is 0 but the method's is not.
    std::size_t infinite = 0;
    double mean_R = 0.0;
    double max_R = 0.0;
    double P0 = 0.0;  // fraction of trials with R > 2
    double P1 = 0.0;  // fraction of trials with R > 1
    double max_integrality_gap = 0.0;
};

struct RatioReport {
    std::vector<RatioTrial> trials;  // trial-major, variants in request order
    std::vector<RatioStats> stats;   // one per variant
    std::size_t oracle_enumerated = 0;
};

struct RatioOptions {
    PlantedSpec model;
    std::vector<Rank1Method> methods{Rank1Method::lp};
    bool with_am = false;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::size_t am_max_iter = 20;
    LpOptions lp;
    OracleOptions oracle;
};

inline std::vector<RatioStats> summarize(const std::vector<RatioTrial>& trials, const std::vector<MethodVariant>& variants) {
    std::vector<RatioStats> stats;
    for (const auto& var : variants) {
        RatioStats s;
        s.method = var.method;
        s.am = var.am;
        double sum = 0.0;
        std::size_t over2 = 0;
        std::size_t over1 = 0;
        for (const auto& t : trials) {
            if (t.method != var.method || t.am != var.am) {
                continue;
            }
            ++s.trials;
            s.max_integrality_gap = std::max(s.max_integrality_gap, t.integrality_gap);
            if (std::isinf(t.R)) {
                ++s.infinite;
                ++over1;
                continue;
            }
            ++s.finite;
            sum += t.R;
            s.max_R = std::max(s.max_R, t.R);
            over2 += t.R > 2.0;
            over1 += t.R > 1.0;
        }
        s.mean_R = s.finite ? sum / static_cast<double>(s.finite) : std::numeric_limits<double>::quiet_NaN();
        // P0 counts finite ratios only; infinite ones are reported on their own.
        s.P0 = s.finite ? static_cast<double>(over2) / static_cast<double>(s.finite) : 0.0;
        s.P1 = s.trials ? static_cast<double>(over1) / static_cast<double>(s.trials) : 0.0;
        stats.push_back(s);
    }
    return stats;
}

/**
 * For each trial: draw a planted instance, solve the exact rank-one problem
 * once, then run every requested method (and its AM refinement) on the same
 * observed matrix and record R = error / oracle error.
 */
inline RatioReport ratio_experiment(const RatioOptions& opts) {
    validate(opts.model);
    const auto variants = expand_variants(opts.methods, opts.with_am);
    std::vector<std::vector<RatioTrial>> rows(opts.trials);
    std::vector<std::uint8_t> enumerated(opts.trials, 0);

    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
        PlantedSpec spec = opts.model;
        spec.seed = derive_seed(opts.seed, seed_stream::ratio_instance, t);
        const auto inst = gen_planted(spec);
        const RowSubsetView view(inst.observed);
        const auto best = exact_rank1(view, opts.oracle);
        enumerated[t] = best.enumerated;
        const std::uint64_t method_seed = derive_seed(opts.seed, seed_stream::ratio_method, t);
        for (const auto& var : variants) {
            const auto step = rank_one(view, var.method, method_seed, opts.lp, var.am, opts.am_max_iter);
            RatioTrial r;
            r.trial = t;
            r.method = var.method;
            r.am = var.am;
            r.error = tile_error(view, step.tile);
            r.oracle_error = best.error;
            r.R = ratio_from_errors(r.error, r.oracle_error);
            r.integrality_gap = step.lp ? step.lp->max_integrality_gap : 0.0;
            rows[t].push_back(r);
        }
    });

    RatioReport out;
    for (std::size_t t = 0; t < opts.trials; ++t) {
        out.trials.insert(out.trials.end(), rows[t].begin(), rows[t].end());
        out.oracle_enumerated += enumerated[t];
    }
    out.stats = summarize(out.trials, variants);
    return out;
}

inline void write_ratio_trials_csv(std::ostream& out, const RatioReport& r) {
    out << "method,am,trial,R,error,oracle_error\n";
    for (const auto& t : r.trials) {
        out << to_string(t.method) << ',' << (t.am ? 1 : 0) << ',' << t.trial << ',' << format_number(t.R) << ','
            << t.error << ',' << t.oracle_error << '\n';
    }
}

inline void write_ratio_summary_csv(std::ostream& out, const RatioReport& r) {
    out << "method,am,trials,mean_R,max_R,P0,P_R_gt_1,infinite_R\n";
    for (const auto& s : r.stats) {
        out << to_string(s.method) << ',' << (s.am ? 1 : 0) << ',' << s.trials << ',' << format_number(s.mean_R) << ','
            << format_number(s.max_R) << ',' << format_number(s.P0) << ',' << format_number(s.P1) << ',' << s.infinite
            << '\n';
    }
}

// ------------------------------------------------------- phase experiment

struct PhaseOptions {
    std::vector<std::size_t> sizes{64};
    std::vector<double> a_grid{0.5};
    std::vector<double> rho_grid{1.0};
    std::size_t k = 4;
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    TbmcConfig tbmc;
    /// Cell accuracy needed to count as approximate recovery.
    double accuracy_threshold = 0.97;
};

struct PhaseCell {
    std::size_t size = 0;
    double a = 0.0;
    double rho = 0.0;
    bool valid = true;
    std::size_t trials = 0;
    std::size_t exact = 0;
    std::size_t approx = 0;

    double exact_prop() const {
        return valid && trials ? static_cast<double>(exact) / static_cast<double>(trials)
                               : std::numeric_limits<double>::quiet_NaN();
    }
    double approx_prop() const {
        return valid && trials ? static_cast<double>(approx) / static_cast<double>(trials)
                               : std::numeric_limits<double>::quiet_NaN();
    }
};

struct PhaseGrid {
    std::vector<std::size_t> sizes;
    std::vector<double> a_grid;
    std::vector<double> rho_grid;
    std::size_t trials = 0;
    /// Size-major, then a, then rho.
    std::vector<PhaseCell> cells;

    const PhaseCell& at(std::size_t s, std::size_t ai, std::size_t ri) const {
        return cells[(s * a_grid.size() + ai) * rho_grid.size() + ri];
    }
};

/**
 * Block-diagonal recovery grid. A (size, a) pair whose smallest block rounds
 * to zero rows marks its cells invalid instead of failing the run.
 */
inline PhaseGrid phase_experiment(const PhaseOptions& opts) {
    if (opts.sizes.empty() || opts.a_grid.empty() || opts.rho_grid.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "phase grids must be nonempty");
    }
    validate(opts.tbmc);
    PhaseGrid grid;
    grid.sizes = opts.sizes;
    grid.a_grid = opts.a_grid;
    grid.rho_grid = opts.rho_grid;
    grid.trials = opts.trials;
    for (auto size : opts.sizes) {
        for (auto a : opts.a_grid) {
            for (auto rho : opts.rho_grid) {
                PhaseCell c;
                c.size = size;
                c.a = a;
                c.rho = rho;
                try {
                    BlockDiagSpec probe{size, opts.k, a, rho, 0};
                    validate(probe);
                    block_sizes(size, opts.k, a);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::SpecInvalid) {
                        throw;
                    }
                    c.valid = false;
                }
                grid.cells.push_back(c);
            }
        }
    }

    const std::size_t cells = grid.cells.size();
    std::vector<std::uint8_t> exact(cells * opts.trials, 0);
    std::vector<std::uint8_t> approx(cells * opts.trials, 0);
    parallel_for(cells * opts.trials, opts.jobs, [&](std::size_t job) {
        const std::size_t c = job / opts.trials;
        const std::size_t t = job % opts.trials;
        const auto& cell = grid.cells[c];
        if (!cell.valid) {
            return;
        }
        BlockDiagSpec spec{cell.size, opts.k, cell.a, cell.rho,
                           derive_seed(derive_seed(opts.seed, seed_stream::phase_instance, c), 0, t)};
        const auto inst = gen_block_diagonal(spec);
        TbmcConfig cfg = opts.tbmc;
        cfg.seed = spec.seed;
        const auto result = complete(inst.observed, cfg);
        const auto score = recovery_score(result.tiling, inst.truth);
        exact[job] = score.exact;
        approx[job] = score.cell_accuracy >= opts.accuracy_threshold;
    });
    for (std::size_t c = 0; c < cells; ++c) {
        auto& cell = grid.cells[c];
        if (!cell.valid) {
            continue;
        }
        cell.trials = opts.trials;
        for (std::size_t t = 0; t < opts.trials; ++t) {
            cell.exact += exact[c * opts.trials + t];
            cell.approx += approx[c * opts.trials + t];
        }
    }
    return grid;
}

inline void write_phase_csv(std::ostream& out, const PhaseGrid& g) {
    out << "size,a,rho,exact_prop,acc97_prop\n";
    for (const auto& c : g.cells) {
        out << c.size << ',' << format_number(c.a, 4) << ',' << format_number(c.rho, 4) << ','
            << format_number(c.exact_prop(), 4) << ',' << format_number(c.approx_prop(), 4) << '\n';
    }
}

/// Heatmap panels (one per size, exact recovery on top, approximate below); a on x, rho on y.
inline void write_phase_svg(std::ostream& out, const PhaseGrid& g) {
    const int cell = 24;
    const int margin = 48;
    const int na = static_cast<int>(g.a_grid.size());
    const int nr = static_cast<int>(g.rho_grid.size());
    const int panel_w = na * cell + margin;
    const int panel_h = nr * cell + margin;
    const int width = static_cast<int>(g.sizes.size()) * panel_w + margin;
    const int height = 2 * panel_h + margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    auto shade = [](double p) {
        if (std::isnan(p)) {
            return std::string("#cccccc");
        }
        const int level = static_cast<int>(std::lround(255.0 * (1.0 - p)));
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
        return std::string(buf);
    };
    for (std::size_t s = 0; s < g.sizes.size(); ++s) {
        for (int row = 0; row < 2; ++row) {
            const int x0 = margin + static_cast<int>(s) * panel_w;
            const int y0 = margin / 2 + row * panel_h;
            out << "<text x=\"" << x0 << "\" y=\"" << y0 - 4 << "\">m=" << g.sizes[s]
                << (row == 0 ? " exact" : " >=97%") << "</text>\n";
            for (int ai = 0; ai < na; ++ai) {
                for (int ri = 0; ri < nr; ++ri) {
                    const auto& c = g.at(s, static_cast<std::size_t>(ai), static_cast<std::size_t>(ri));
                    const double p = row == 0 ? c.exact_prop() : c.approx_prop();
                    // Highest rho at the top.
                    const int y = y0 + (nr - 1 - ri) * cell;
                    out << "<rect x=\"" << x0 + ai * cell << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
                        << cell << "\" fill=\"" << shade(p) << "\"><title>a=" << format_number(c.a, 3)
                        << " rho=" << format_number(c.rho, 3) << " p=" << format_number(p, 3) << "</title></rect>\n";
                }
            }
        }
    }
    out << "</svg>\n";
}

// -------------------------------------------------------- held-out eval

struct EvalOptions {
    std::string dataset = "data";
    double rho = 0.7;
    std::vector<Rank1Method> methods{Rank1Method::lp};
    bool with_am = false;
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    TbmcConfig tbmc;
};

struct EvalRun {
    std::size_t trial = 0;
    Rank1Method method = Rank1Method::lp;
    bool am = false;
    double P_test = 0.0;
    double P_train = 0.0;
    std::size_t tiles = 0;
};

struct EvalRow {
    Rank1Method method = Rank1Method::lp;
    bool am = false;
    std::size_t trials = 0;
    double P_test = 0.0;
    double P_train = 0.0;
    double tiles = 0.0;
};

struct EvalReport {
    std::string dataset;
    std::vector<EvalRun> runs;  // trial-major
    std::vector<EvalRow> rows;  // means per variant
};

/**
 * Repeated random splits: tile the training side with each method and record
 * the percentage error on held-out entries and on the training entries.
 */
inline EvalReport eval_experiment(const ObservedBinaryMatrix& m, const EvalOptions& opts) {
    validate(opts.tbmc);
    if (!(opts.rho > 0.0 && opts.rho < 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "split fraction must lie strictly inside (0, 1)");
    }
    const auto variants = expand_variants(opts.methods, opts.with_am);
    std::vector<std::vector<EvalRun>> per_trial(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
        const auto parts = split(m, opts.rho, derive_seed(opts.seed, seed_stream::eval_split, t));
        for (const auto& var : variants) {
            TbmcConfig cfg = opts.tbmc;
            cfg.method = var.method;
            cfg.use_am = var.am;
            cfg.seed = derive_seed(opts.seed, seed_stream::eval_method, t);
            const auto result = complete(parts.train, cfg);
            EvalRun run;
            run.trial = t;
            run.method = var.method;
            run.am = var.am;
            run.P_test = proportional_error(result.tiling, parts.test);
            run.P_train = parts.train.observed()
                              ? 100.0 * static_cast<double>(result.report.train_error) /
                                    static_cast<double>(parts.train.observed())
                              : 0.0;
            run.tiles = result.report.tiles_found;
            per_trial[t].push_back(run);
        }
    });

    EvalReport out;
    out.dataset = opts.dataset;
    for (auto& runs : per_trial) {
        out.runs.insert(out.runs.end(), runs.begin(), runs.end());
    }
    for (const auto& var : variants) {
        EvalRow row;
        row.method = var.method;
        row.am = var.am;
        for (const auto& r : out.runs) {
            if (r.method == var.method && r.am == var.am) {
                ++row.trials;
                row.P_test += r.P_test;
                row.P_train += r.P_train;
                row.tiles += static_cast<double>(r.tiles);
            }
        }
        if (row.trials) {
            const auto n = static_cast<double>(row.trials);
            row.P_test /= n;
            row.P_train /= n;
            row.tiles /= n;
        }
        out.rows.push_back(row);
    }
    return out;
}

inline void write_eval_csv(std::ostream& out, const EvalReport& r) {
    out << "dataset,method,am,P_test,P_train,tiles\n";
    for (const auto& row : r.rows) {
        out << r.dataset << ',' << to_string(row.method) << ',' << (row.am ? 1 : 0) << ','
            << format_number(row.P_test, 4) << ',' << format_number(row.P_train, 4) << ','
            << format_number(row.tiles, 2) << '\n';
    }
}

inline void write_eval_runs_csv(std::ostream& out, const EvalReport& r) {
    out << "dataset,method,am,trial,P_test,P_train,tiles\n";
    for (const auto& run : r.runs) {
        out << r.dataset << ',' << to_string(run.method) << ',' << (run.am ? 1 : 0) << ',' << run.trial << ','
            << format_number(run.P_test, 4) << ',' << format_number(run.P_train, 4) << ',' << run.tiles << '\n';
    }
}

}

#endif
