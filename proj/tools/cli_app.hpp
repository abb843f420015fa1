#ifndef TBMC_TOOLS_CLI_APP_HPP
#define TBMC_TOOLS_CLI_APP_HPP

// The `tbmc` command-line front end. Kept in a header so the test suite can
// drive it in-process with captured streams.

#include "tbmc/tbmc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tbmc::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2, numerical = 3 };

inline int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NumericalFailure:
            return numerical;
        case ErrorCode::ConfigInvalid:
        case ErrorCode::SpecInvalid:
            return usage;
        default:
            return data;
    }
}

namespace detail {

using nlohmann::ordered_json;

inline std::vector<Rank1Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Rank1Method> out;
    for (const auto& n : names) {
        auto m = parse_rank1_method(n);
        if (!m) {
            throw Error(ErrorCode::ConfigInvalid, "unknown method '" + n + "' (expected lp, average or partition)");
        }
        out.push_back(*m);
    }
    if (out.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "no methods given");
    }
    return out;
}

inline LpEngine parse_engine(const std::string& name) {
    if (name == "auto") {
        return LpEngine::automatic;
    }
    if (name == "simplex") {
        return LpEngine::simplex;
    }
    if (name == "mincut") {
        return LpEngine::mincut;
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown LP engine '" + name + "'");
}

inline std::vector<std::size_t> support(const BitVector& x) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) {
            out.push_back(i);
        }
    }
    return out;
}

inline ordered_json report_json(const TilingReport& r) {
    ordered_json j;
    j["tiles_found"] = r.tiles_found;
    j["train_error"] = r.train_error;
    j["iterations"] = r.iterations;
    j["max_queue"] = r.max_queue;
    j["empty_branches"] = r.empty_branches;
    j["uncovered_rows"] = r.uncovered_rows;
    j["stopped_at_k_max"] = r.stopped_at_k_max;
    j["max_integrality_gap"] = r.max_integrality_gap;
    auto tiles = ordered_json::array();
    for (const auto& t : r.tiles) {
        tiles.push_back({{"reason", to_string(t.reason)},
                         {"rows", t.rows},
                         {"cols", t.cols},
                         {"max_distance", t.max_distance}});
    }
    j["tiles"] = std::move(tiles);
    return j;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    return f;
}

/// Writes an observed matrix plus its ground truth next to `path`.
inline void write_instance(const std::string& path, const GeneratedInstance& inst, const std::string& spec_text) {
    write_triplets_csv(path, inst.observed);
    std::vector<Triplet> all;
    all.reserve(inst.truth.rows * inst.truth.cols);
    for (std::size_t i = 0; i < inst.truth.rows; ++i) {
        for (std::size_t j = 0; j < inst.truth.cols; ++j) {
            all.push_back(Triplet{i, j, inst.truth.at(i, j)});
        }
    }
    write_triplets_csv(path + ".full.csv",
                       ObservedBinaryMatrix::from_triplets(inst.truth.rows, inst.truth.cols, std::move(all)));
    write_tiling(inst.truth.tiling, path + ".tiling");
    auto spec = open_out(path + ".spec");
    spec << spec_text;
}

}

/**
 * Parses `argv` and runs one subcommand. Results go to `out`, diagnostics to
 * `err`. Returns 0 on success, 1 on usage errors, 2 on data errors and 3 on
 * numerical failures.
 */
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using detail::ordered_json;

    CLI::App app{"Low-rank binary matrix completion by recursive row partitioning."};
    app.name("tbmc");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.fallthrough(false);

    std::uint64_t seed = 0;
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Master random seed; every random draw is derived from it");
    };
    std::size_t jobs = 1;
    auto add_jobs = [&](CLI::App* sub) {
        sub->add_option("--jobs", jobs, "Worker threads for independent trials (0 = all cores)");
    };
    std::string lp_engine = "auto";
    auto add_engine = [&](CLI::App* sub) {
        sub->add_option("--lp-engine", lp_engine, "LP solver: auto, simplex or mincut")
            ->check(CLI::IsMember({"auto", "simplex", "mincut"}));
    };
    std::size_t am_max_iter = 20;
    auto add_am_iter = [&](CLI::App* sub) {
        sub->add_option("--am-max-iter", am_max_iter, "Sweep limit for alternating-minimisation refinement");
    };

    // rank1
    auto* rank1 = app.add_subcommand("rank1", "Best rank-one tile of a triplet matrix (JSON on stdout)");
    std::string r1_input;
    std::string r1_method = "lp";
    bool r1_am = false;
    bool r1_oracle = false;
    std::string r1_dump;
    rank1->add_option("--input", r1_input, "Triplet CSV (row,col,value)")->required();
    rank1->add_option("--method", r1_method, "Rank-one method: lp, average or partition")
        ->check(CLI::IsMember({"lp", "average", "partition"}));
    rank1->add_flag("--am", r1_am, "Refine the tile with alternating minimisation");
    rank1->add_flag("--oracle", r1_oracle, "Also solve the exact problem and report the ratio R");
    rank1->add_option("--dump-lp", r1_dump, "Write the LP relaxation in CPLEX LP format to this file");
    add_seed(rank1);
    add_engine(rank1);
    add_am_iter(rank1);

    // complete
    auto* comp = app.add_subcommand("complete", "Tile a matrix; writes U.csv, V.csv and report.json");
    std::string c_input;
    std::string c_out;
    std::string c_method = "lp";
    double c_tol = 0.05;
    std::size_t c_kmax = 0;
    bool c_am = false;
    comp->add_option("--input", c_input, "Triplet CSV (row,col,value)")->required();
    comp->add_option("--out", c_out, "Output directory for U.csv, V.csv and report.json")->required();
    comp->add_option("--tol", c_tol, "Acceptance tolerance on scaled Hamming distance");
    comp->add_option("--k-max", c_kmax, "Maximum number of tiles (0 = min(rows, 256))");
    comp->add_option("--method", c_method, "Rank-one method: lp, average or partition")
        ->check(CLI::IsMember({"lp", "average", "partition"}));
    comp->add_flag("--am", c_am, "Refine every rank-one step with alternating minimisation");
    add_seed(comp);
    add_engine(comp);
    add_am_iter(comp);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic instance");
    synth->require_subcommand(1);
    std::string s_out;
    std::string s_config;
    PlantedSpec ps;
    BlockDiagSpec bs;
    auto* planted = synth->add_subcommand("planted", "Planted tiles with flip noise and a random mask");
    planted->add_option("--m", ps.m, "Rows");
    planted->add_option("--n", ps.n, "Columns");
    planted->add_option("--tiles", ps.k_tiles, "Number of planted tiles (contiguous row blocks)");
    planted->add_option("--tau", ps.tau, "Fraction of columns in each tile");
    planted->add_option("--eps", ps.eps, "Fraction of cells flipped");
    planted->add_option("--rho", ps.rho, "Probability that a cell is observed");
    planted->add_option("--config", s_config, "key=value spec file; explicit flags override it");
    planted->add_option("--out", s_out, "Observed triplet CSV; ground truth goes to OUT.full.csv, OUT.tiling/, OUT.spec")
        ->required();
    add_seed(planted);
    auto* blockdiag = synth->add_subcommand("blockdiag", "Symmetric block-diagonal tiles of shrinking size");
    blockdiag->add_option("--m", bs.m, "Rows and columns");
    blockdiag->add_option("--k", bs.k, "Number of diagonal blocks");
    blockdiag->add_option("--a", bs.a, "Size ratio between consecutive blocks, in (0, 1]");
    blockdiag->add_option("--rho", bs.rho, "Probability that a cell is observed");
    blockdiag->add_option("--config", s_config, "key=value spec file; explicit flags override it");
    blockdiag->add_option("--out", s_out, "Observed triplet CSV; ground truth goes to OUT.full.csv, OUT.tiling/, OUT.spec")
        ->required();
    add_seed(blockdiag);

    // ratio
    auto* ratio = app.add_subcommand("ratio", "Approximation ratio against the exact rank-one optimum (CSV)");
    std::string r_model = "planted";
    PlantedSpec rs;
    std::size_t r_trials = 100;
    std::vector<std::string> r_methods{"lp", "average", "partition"};
    bool r_am = false;
    std::string r_out;
    ratio->add_option("--model", r_model, "Instance model")->check(CLI::IsMember({"planted"}));
    ratio->add_option("--m", rs.m, "Rows");
    ratio->add_option("--n", rs.n, "Columns");
    ratio->add_option("--tiles", rs.k_tiles, "Number of planted tiles");
    ratio->add_option("--tau", rs.tau, "Fraction of columns in each tile");
    ratio->add_option("--eps", rs.eps, "Fraction of cells flipped");
    ratio->add_option("--rho", rs.rho, "Probability that a cell is observed");
    ratio->add_option("--trials", r_trials, "Number of random instances");
    ratio->add_option("--methods", r_methods, "Comma-separated rank-one methods")->delimiter(',');
    ratio->add_flag("--am", r_am, "Also run each method followed by alternating minimisation");
    ratio->add_option("--out", r_out, "Write the per-trial CSV here");
    add_seed(ratio);
    add_jobs(ratio);
    add_engine(ratio);
    add_am_iter(ratio);

    // phase
    auto* phase = app.add_subcommand("phase", "Recovery proportions on a grid of block-diagonal models (CSV)");
    std::vector<std::size_t> p_sizes{128};
    std::vector<double> p_a{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> p_rho{0.1, 0.3, 0.5, 0.7, 0.9};
    std::size_t p_k = 4;
    std::size_t p_trials = 10;
    double p_tol = 0.05;
    std::string p_out;
    std::string p_svg;
    phase->add_option("--sizes", p_sizes, "Comma-separated matrix sizes")->delimiter(',');
    phase->add_option("--a-grid", p_a, "Comma-separated block ratios a")->delimiter(',');
    phase->add_option("--rho-grid", p_rho, "Comma-separated observation probabilities")->delimiter(',');
    phase->add_option("--k", p_k, "Number of diagonal blocks");
    phase->add_option("--trials", p_trials, "Trials per grid cell");
    phase->add_option("--tol", p_tol, "Acceptance tolerance passed to the tiler");
    phase->add_option("--out", p_out, "Write the CSV here instead of stdout");
    phase->add_option("--svg", p_svg, "Also write an SVG heatmap");
    add_seed(phase);
    add_jobs(phase);
    add_engine(phase);

    // eval
    auto* ev = app.add_subcommand("eval", "Held-out error over repeated random splits (CSV)");
    std::string e_input;
    std::string e_format = "triplets";
    double e_threshold = 4.0;
    std::string e_name;
    double e_rho = 0.7;
    double e_tol = 0.05;
    std::size_t e_kmax = 0;
    std::vector<std::string> e_methods{"lp"};
    bool e_am = false;
    std::size_t e_trials = 10;
    std::string e_out;
    ev->add_option("--input", e_input, "Dataset file")->required();
    ev->add_option("--format", e_format, "Input format: triplets or movielens")
        ->check(CLI::IsMember({"triplets", "movielens"}));
    ev->add_option("--threshold", e_threshold, "Rating treated as positive (movielens format)");
    ev->add_option("--dataset", e_name, "Dataset label in the CSV (default: file stem)");
    ev->add_option("--rho", e_rho, "Fraction of observed entries used for training, in (0, 1)");
    ev->add_option("--tol", e_tol, "Acceptance tolerance on scaled Hamming distance");
    ev->add_option("--k-max", e_kmax, "Maximum number of tiles (0 = min(rows, 256))");
    ev->add_option("--methods", e_methods, "Comma-separated rank-one methods")->delimiter(',');
    ev->add_flag("--am", e_am, "Also run each method with alternating minimisation");
    ev->add_option("--trials", e_trials, "Number of random splits");
    ev->add_option("--out", e_out, "Write the per-split CSV here");
    add_seed(ev);
    add_jobs(ev);
    add_engine(ev);
    add_am_iter(ev);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Convert a dataset to canonical triplet CSV");
    ingest->require_subcommand(1);
    std::string i_input;
    std::string i_out;
    double i_threshold = 4.0;
    auto* movielens = ingest->add_subcommand("movielens", "user item rating [timestamp] records");
    movielens->add_option("--input", i_input, "Ratings file")->required();
    movielens->add_option("--threshold", i_threshold, "Ratings at or above this are positive");
    movielens->add_option("--out", i_out, "Triplet CSV; id maps go to OUT.users.csv and OUT.items.csv")->required();
    auto* triplets = ingest->add_subcommand("triplets", "Validate and normalise a triplet CSV");
    triplets->add_option("--input", i_input, "Triplet CSV")->required();
    triplets->add_option("--out", i_out, "Output triplet CSV")->required();

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) {
        args.emplace_back(argv[i]);
    }
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        // --help lands here with exit code 0; help text is printed for the
        // innermost selected subcommand.
        return app.exit(e, out, err) == 0 ? ok : usage;
    }

    LpOptions lp;
    try {
        lp.engine = detail::parse_engine(lp_engine);

        if (rank1->parsed()) {
            auto m = read_triplets_csv(r1_input);
            const auto method = *parse_rank1_method(r1_method);
            if (!r1_dump.empty()) {
                auto f = detail::open_out(r1_dump);
                write_lp(f, build_lp(m));
            }
            const RowSubsetView view(m);
            const auto step = rank_one(view, method, seed, lp, r1_am, am_max_iter);
            ordered_json j;
            j["rows"] = m.rows();
            j["cols"] = m.cols();
            j["observed"] = m.observed();
            j["method"] = r1_method;
            j["am"] = r1_am;
            j["u"] = detail::support(step.tile.u);
            j["v"] = detail::support(step.tile.v);
            const auto error = tile_error(view, step.tile);
            j["error"] = error;
            if (step.lp) {
                j["lp"] = {{"engine", to_string(step.lp->engine)},
                           {"objective", step.lp->objective},
                           {"iterations", step.lp->iterations},
                           {"max_integrality_gap", step.lp->max_integrality_gap}};
            }
            if (r1_am) {
                j["am_sweeps"] = step.am_sweeps;
            }
            if (r1_oracle) {
                const auto best = exact_rank1(view);
                j["oracle_error"] = best.error;
                const double R = ratio_from_errors(error, best.error);
                j["R"] = std::isinf(R) ? ordered_json("inf") : ordered_json(R);
            }
            out << j.dump(2) << "\n";
            return ok;
        }

        if (comp->parsed()) {
            auto m = read_triplets_csv(c_input);
            TbmcConfig cfg;
            cfg.tolerance = c_tol;
            cfg.k_max = c_kmax;
            cfg.method = *parse_rank1_method(c_method);
            cfg.use_am = c_am;
            cfg.am_max_iter = am_max_iter;
            cfg.seed = seed;
            cfg.lp = lp;
            const auto result = complete(m, cfg);
            write_tiling(result.tiling, c_out);
            ordered_json j = detail::report_json(result.report);
            j["rows"] = m.rows();
            j["cols"] = m.cols();
            j["observed"] = m.observed();
            const auto text = j.dump(2) + "\n";
            auto f = detail::open_out((std::filesystem::path(c_out) / "report.json").string());
            f << text;
            out << text;
            return ok;
        }

        if (planted->parsed()) {
            PlantedSpec spec = ps;
            if (!s_config.empty()) {
                std::ifstream in(s_config);
                if (!in) {
                    throw Error(ErrorCode::IoError, "cannot open " + s_config);
                }
                std::stringstream text;
                text << in.rdbuf();
                spec = planted_from_config(text.str());
                // Flags given explicitly win over the file.
                if (planted->count("--m")) spec.m = ps.m;
                if (planted->count("--n")) spec.n = ps.n;
                if (planted->count("--tiles")) spec.k_tiles = ps.k_tiles;
                if (planted->count("--tau")) spec.tau = ps.tau;
                if (planted->count("--eps")) spec.eps = ps.eps;
                if (planted->count("--rho")) spec.rho = ps.rho;
                if (planted->count("--seed")) spec.seed = seed;
            } else {
                spec.seed = seed;
            }
            const auto inst = gen_planted(spec);
            detail::write_instance(s_out, inst, to_config(spec));
            return ok;
        }

        if (blockdiag->parsed()) {
            BlockDiagSpec spec = bs;
            if (!s_config.empty()) {
                std::ifstream in(s_config);
                if (!in) {
                    throw Error(ErrorCode::IoError, "cannot open " + s_config);
                }
                std::stringstream text;
                text << in.rdbuf();
                spec = blockdiag_from_config(text.str());
                if (blockdiag->count("--m")) spec.m = bs.m;
                if (blockdiag->count("--k")) spec.k = bs.k;
                if (blockdiag->count("--a")) spec.a = bs.a;
                if (blockdiag->count("--rho")) spec.rho = bs.rho;
                if (blockdiag->count("--seed")) spec.seed = seed;
            } else {
                spec.seed = seed;
            }
            const auto inst = gen_block_diagonal(spec);
            detail::write_instance(s_out, inst, to_config(spec));
            return ok;
        }

        if (ratio->parsed()) {
            RatioOptions opts;
            opts.model = rs;
            opts.methods = detail::parse_methods(r_methods);
            opts.with_am = r_am;
            opts.trials = r_trials;
            opts.seed = seed;
            opts.jobs = jobs;
            opts.am_max_iter = am_max_iter;
            opts.lp = lp;
            const auto report = ratio_experiment(opts);
            if (!r_out.empty()) {
                auto f = detail::open_out(r_out);
                write_ratio_trials_csv(f, report);
            }
            write_ratio_summary_csv(out, report);
            return ok;
        }

        if (phase->parsed()) {
            PhaseOptions opts;
            opts.sizes = p_sizes;
            opts.a_grid = p_a;
            opts.rho_grid = p_rho;
            opts.k = p_k;
            opts.trials = p_trials;
            opts.seed = seed;
            opts.jobs = jobs;
            opts.tbmc.tolerance = p_tol;
            opts.tbmc.lp = lp;
            const auto grid = phase_experiment(opts);
            if (p_out.empty()) {
                write_phase_csv(out, grid);
            } else {
                auto f = detail::open_out(p_out);
                write_phase_csv(f, grid);
            }
            if (!p_svg.empty()) {
                auto f = detail::open_out(p_svg);
                write_phase_svg(f, grid);
            }
            return ok;
        }

        if (ev->parsed()) {
            const ObservedBinaryMatrix m =
                e_format == "movielens" ? read_movielens(e_input, e_threshold).matrix : read_triplets_csv(e_input);
            EvalOptions opts;
            opts.dataset = e_name.empty() ? std::filesystem::path(e_input).stem().string() : e_name;
            opts.rho = e_rho;
            opts.methods = detail::parse_methods(e_methods);
            opts.with_am = e_am;
            opts.trials = e_trials;
            opts.seed = seed;
            opts.jobs = jobs;
            opts.tbmc.tolerance = e_tol;
            opts.tbmc.k_max = e_kmax;
            opts.tbmc.am_max_iter = am_max_iter;
            opts.tbmc.lp = lp;
            const auto report = eval_experiment(m, opts);
            if (!e_out.empty()) {
                auto f = detail::open_out(e_out);
                write_eval_runs_csv(f, report);
            }
            write_eval_csv(out, report);
            return ok;
        }

        if (movielens->parsed()) {
            const auto ds = read_movielens(i_input, i_threshold);
            write_triplets_csv(i_out, ds.matrix);
            auto users = detail::open_out(i_out + ".users.csv");
            write_id_map(users, ds.user_ids);
            auto items = detail::open_out(i_out + ".items.csv");
            write_id_map(items, ds.item_ids);
            return ok;
        }

        if (triplets->parsed()) {
            write_triplets_csv(i_out, read_triplets_csv(i_input));
            return ok;
        }
    } catch (const Error& e) {
        err << "tbmc: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "tbmc: internal error: " << e.what() << "\n";
        return data;
    }
    err << "tbmc: no command given\n";
    return usage;
}

}

#endif
