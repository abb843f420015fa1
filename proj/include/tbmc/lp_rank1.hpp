#ifndef TBMC_LP_RANK1_HPP
#define TBMC_LP_RANK1_HPP

#include "binmat.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <vector>

/**
 * @file lp_rank1.hpp
 * @brief LP relaxation of the best binary rank-one approximation under
 * missing data, and two exact solvers for it.
 *
 * For a (sub)matrix with observed ones Omega1 and observed zeros Omega0 the
 * relaxation is
 *
 *     max  sum_{(i,j) in Omega1} (u_i + v_j) / 2  -  sum_{(i,j) in Omega0} z_ij
 *     s.t. u_i + v_j - z_ij <= 1                      for (i,j) in Omega0
 *          0 <= u, v, z <= 1
 *
 * Its constraint matrix is an unsigned bipartite incidence matrix with a
 * negated identity appended, hence totally unimodular, so every vertex is
 * integral and the optimum is read off directly as a tile.
 */

namespace tbmc {

/**
 * @brief The relaxation in index form.
 *
 * Variable order is u_0..u_{m-1}, v_0..v_{n-1}, z_0..z_{E-1}; constraint k
 * belongs to `zero_entries[k]`, listed in (row, col) order.
 */
struct LpProblem {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> zero_entries;
    std::vector<std::uint32_t> row_ones;
    std::vector<std::uint32_t> col_ones;

    std::size_t num_variables() const { return m + n + zero_entries.size(); }
    std::size_t num_constraints() const { return zero_entries.size(); }

    double objective_coefficient(std::size_t var) const {
        if (var < m) {
            return 0.5 * row_ones[var];
        }
        if (var < m + n) {
            return 0.5 * col_ones[var - m];
        }
        return -1.0;
    }

    double evaluate(std::span<const double> x) const {
        double total = 0;
        for (std::size_t k = 0; k < num_variables(); ++k) {
            total += objective_coefficient(k) * x[k];
        }
        return total;
    }
};

inline LpProblem build_lp(const RowSubsetView& view) {
    LpProblem p;
    p.m = view.rows();
    p.n = view.cols();
    p.row_ones.assign(p.m, 0);
    p.col_ones.assign(p.n, 0);
    for (std::size_t i = 0; i < p.m; ++i) {
        for (const auto& e : view.row(i)) {
            if (e.bit) {
                ++p.row_ones[i];
                ++p.col_ones[e.col];
            } else {
                p.zero_entries.emplace_back(static_cast<std::uint32_t>(i), e.col);
            }
        }
    }
    return p;
}

inline LpProblem build_lp(const ObservedBinaryMatrix& m) {
    return build_lp(RowSubsetView(m));
}

enum class LpEngine {
    automatic,
    simplex,
    mincut,
};

inline const char* to_string(LpEngine e) {
    switch (e) {
        case LpEngine::automatic: return "auto";
        case LpEngine::simplex: return "simplex";
        case LpEngine::mincut: return "mincut";
    }
    return "unknown";
}

struct LpOptions {
    LpEngine engine = LpEngine::automatic;
    /// `automatic` uses the simplex up to this many constraints, min-cut above.
    std::size_t simplex_constraint_limit = 20000;
    /// Pivot cap; 0 selects 10 x (variables + constraints).
    std::size_t max_pivots = 0;
};

struct Rank1Solution {
    Tile tile;
    double objective = 0;
    /// u, v, z at the optimum, before rounding or zero-preference.
    std::vector<double> raw_values;
    double max_integrality_gap = 0;
    std::size_t iterations = 0;
    LpEngine engine = LpEngine::simplex;
};

inline constexpr double lp_tolerance = 1e-9;

namespace detail {

/**
 * Bounded-variable primal simplex specialised to the rank-one relaxation.
 *
 * Rows are the Omega0 constraints with slacks s_e >= 0 appended. A basis
 * holds, per row, at most one of its row-local columns (z_e or s_e); the
 * remaining rows R are covered by basic u/v columns K with |R| = |K|. The
 * K x R block is nonsingular exactly when the graph (K, R) is a forest in
 * which every tree carries one "anchor" edge whose other endpoint is not
 * basic, so both basis solves are tree sweeps and nothing is factorised.
 *
 * Entering and leaving variables follow Bland's least-index rule, with ties
 * between a bound flip and a leaving basic resolved toward the flip.
 */
class ForestSimplex {
public:
    explicit ForestSimplex(const LpProblem& p) : p_(p), m_(p.m), n_(p.n), E_(p.zero_entries.size()) {
        nodes_ = m_ + n_;
        total_ = nodes_ + 2 * E_;

        node_ptr_.assign(nodes_ + 1, 0);
        for (const auto& [i, j] : p.zero_entries) {
            ++node_ptr_[i + 1];
            ++node_ptr_[m_ + j + 1];
        }
        for (std::size_t k = 0; k < nodes_; ++k) {
            node_ptr_[k + 1] += node_ptr_[k];
        }
        node_rows_.resize(node_ptr_.back());
        std::vector<std::size_t> fill(node_ptr_.begin(), node_ptr_.end() - 1);
        for (std::size_t e = 0; e < E_; ++e) {
            node_rows_[fill[p.zero_entries[e].first]++] = e;
            node_rows_[fill[m_ + p.zero_entries[e].second]++] = e;
        }

        cost_.assign(total_, 0.0);
        for (std::size_t k = 0; k < nodes_ + E_; ++k) {
            cost_[k] = p.objective_coefficient(k);
        }
        x_.assign(total_, 0.0);
        node_basic_.assign(nodes_, 0);
        local_.assign(E_, Local::slack);
        for (std::size_t e = 0; e < E_; ++e) {
            x_[slack(e)] = 1.0;
        }

        y_.assign(E_, 0.0);
        parent_edge_.assign(nodes_, npos);
        visited_.assign(nodes_, 0);
        alpha_node_.assign(nodes_, 0.0);
        rhs_.assign(E_, 0.0);
        touched_flag_.assign(E_, 0);
    }

    std::size_t run(std::size_t max_pivots) {
        std::size_t pivots = 0;
        while (true) {
            build_forest();
            compute_duals();
            auto entering = choose_entering();
            if (entering == npos) {
                return pivots;
            }
            if (pivots >= max_pivots) {
                throw Error(ErrorCode::NumericalFailure,
                            "simplex pivot cap of " + std::to_string(max_pivots) + " exceeded");
            }
            pivot(entering);
            ++pivots;
        }
    }

    std::vector<double> structural_values() const {
        return std::vector<double>(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(nodes_ + E_));
    }

private:
    enum class Local : std::uint8_t { none, z, slack };
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::size_t zvar(std::size_t e) const { return nodes_ + e; }
    std::size_t slack(std::size_t e) const { return nodes_ + E_ + e; }
    std::size_t row_node(std::size_t e) const { return p_.zero_entries[e].first; }
    std::size_t col_node(std::size_t e) const { return m_ + p_.zero_entries[e].second; }

    double upper(std::size_t var) const {
        return var >= nodes_ + E_ ? std::numeric_limits<double>::infinity() : 1.0;
    }

    bool is_basic(std::size_t var) const {
        if (var < nodes_) {
            return node_basic_[var] != 0;
        }
        if (var < nodes_ + E_) {
            return local_[var - nodes_] == Local::z;
        }
        return local_[var - nodes_ - E_] == Local::slack;
    }

    [[noreturn]] static void singular() {
        throw Error(ErrorCode::NumericalFailure, "simplex basis became singular");
    }

    void build_forest() {
        order_.clear();
        std::fill(parent_edge_.begin(), parent_edge_.end(), npos);
        std::fill(visited_.begin(), visited_.end(), 0);

        // Incidence of the uncovered rows R on basic nodes, plus the anchors.
        adj_ptr_.assign(nodes_ + 1, 0);
        anchors_.clear();
        r_rows_.clear();
        std::size_t basic_nodes = 0;
        for (std::size_t k = 0; k < nodes_; ++k) {
            basic_nodes += node_basic_[k];
        }
        for (std::size_t e = 0; e < E_; ++e) {
            if (local_[e] != Local::none) {
                continue;
            }
            const bool bu = node_basic_[row_node(e)];
            const bool bv = node_basic_[col_node(e)];
            if (!bu && !bv) {
                singular();
            }
            r_rows_.push_back(e);
            if (bu) {
                ++adj_ptr_[row_node(e) + 1];
            }
            if (bv) {
                ++adj_ptr_[col_node(e) + 1];
            }
            if (bu != bv) {
                anchors_.push_back(e);
            }
        }
        if (r_rows_.size() != basic_nodes) {
            singular();
        }
        for (std::size_t k = 0; k < nodes_; ++k) {
            adj_ptr_[k + 1] += adj_ptr_[k];
        }
        adj_.resize(adj_ptr_.back());
        std::vector<std::size_t> fill(adj_ptr_.begin(), adj_ptr_.end() - 1);
        for (auto e : r_rows_) {
            if (node_basic_[row_node(e)]) {
                adj_[fill[row_node(e)]++] = e;
            }
            if (node_basic_[col_node(e)]) {
                adj_[fill[col_node(e)]++] = e;
            }
        }

        for (auto a : anchors_) {
            const std::size_t root = node_basic_[row_node(a)] ? row_node(a) : col_node(a);
            if (visited_[root]) {
                singular();
            }
            visited_[root] = 1;
            parent_edge_[root] = a;
            std::size_t head = order_.size();
            order_.push_back(root);
            while (head < order_.size()) {
                const std::size_t node = order_[head++];
                for (std::size_t k = adj_ptr_[node]; k < adj_ptr_[node + 1]; ++k) {
                    const std::size_t e = adj_[k];
                    if (e == parent_edge_[node]) {
                        continue;
                    }
                    const std::size_t other = row_node(e) == node ? col_node(e) : row_node(e);
                    if (!node_basic_[other] || visited_[other]) {
                        singular();
                    }
                    visited_[other] = 1;
                    parent_edge_[other] = e;
                    order_.push_back(other);
                }
            }
        }
        if (order_.size() != basic_nodes) {
            singular();
        }
    }

    // Solves B^T y = c_B.
    void compute_duals() {
        for (std::size_t e = 0; e < E_; ++e) {
            y_[e] = local_[e] == Local::z ? 1.0 : 0.0;
        }
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const std::size_t node = *it;
            const std::size_t pe = parent_edge_[node];
            double sum = 0;
            for (std::size_t k = node_ptr_[node]; k < node_ptr_[node + 1]; ++k) {
                const std::size_t e = node_rows_[k];
                if (e != pe) {
                    sum += y_[e];
                }
            }
            y_[pe] = cost_[node] - sum;
        }
    }

    double reduced_cost(std::size_t var) const {
        if (var < nodes_) {
            double sum = 0;
            for (std::size_t k = node_ptr_[var]; k < node_ptr_[var + 1]; ++k) {
                sum += y_[node_rows_[k]];
            }
            return cost_[var] - sum;
        }
        if (var < nodes_ + E_) {
            return -1.0 + y_[var - nodes_];
        }
        return -y_[var - nodes_ - E_];
    }

    std::size_t choose_entering() {
        for (std::size_t var = 0; var < total_; ++var) {
            if (is_basic(var)) {
                continue;
            }
            const double d = reduced_cost(var);
            const bool at_lower = x_[var] <= 0.5;
            if ((at_lower && d > lp_tolerance) || (!at_lower && d < -lp_tolerance)) {
                direction_ = at_lower ? 1.0 : -1.0;
                return var;
            }
        }
        return npos;
    }

    // Coefficient of the entering column in row e.
    double entering_coefficient(std::size_t q, std::size_t e) const {
        if (q < nodes_) {
            return (row_node(e) == q || col_node(e) == q) ? 1.0 : 0.0;
        }
        if (q < nodes_ + E_) {
            return q - nodes_ == e ? -1.0 : 0.0;
        }
        return q - nodes_ - E_ == e ? 1.0 : 0.0;
    }

    void touch(std::size_t e, double amount) {
        if (!touched_flag_[e]) {
            touched_flag_[e] = 1;
            touched_.push_back(e);
            rhs_[e] = 0;
        }
        rhs_[e] += amount;
    }

    // Solves B alpha = a_q; basic nodes get alpha_node_, covered rows rhs_/kappa.
    void ftran(std::size_t q) {
        for (auto node : order_) {
            const std::size_t pe = parent_edge_[node];
            const std::size_t other = row_node(pe) == node ? col_node(pe) : row_node(pe);
            const double a = entering_coefficient(q, pe);
            alpha_node_[node] = node_basic_[other] ? a - alpha_node_[other] : a;
        }

        for (auto e : touched_) {
            touched_flag_[e] = 0;
        }
        touched_.clear();
        if (q < nodes_) {
            for (std::size_t k = node_ptr_[q]; k < node_ptr_[q + 1]; ++k) {
                touch(node_rows_[k], 1.0);
            }
        } else if (q < nodes_ + E_) {
            touch(q - nodes_, -1.0);
        } else {
            touch(q - nodes_ - E_, 1.0);
        }
        for (auto node : order_) {
            if (alpha_node_[node] != 0.0) {
                for (std::size_t k = node_ptr_[node]; k < node_ptr_[node + 1]; ++k) {
                    touch(node_rows_[k], -alpha_node_[node]);
                }
            }
        }
    }

    void pivot(std::size_t q) {
        ftran(q);
        const double sigma = direction_;

        double best = upper(q);
        std::size_t leaving = npos;
        double leaving_delta = 0;

        auto consider = [&](std::size_t var, double alpha) {
            if (std::abs(alpha) <= lp_tolerance) {
                return;
            }
            const double delta = -sigma * alpha;
            double limit;
            if (delta < 0) {
                limit = x_[var] / -delta;
            } else {
                const double ub = upper(var);
                if (std::isinf(ub)) {
                    return;
                }
                limit = (ub - x_[var]) / delta;
            }
            if (limit < best - lp_tolerance) {
                best = limit;
                leaving = var;
                leaving_delta = delta;
            } else if (limit <= best + lp_tolerance && leaving != npos && var < leaving) {
                leaving = var;
                leaving_delta = delta;
            }
        };

        for (auto node : order_) {
            consider(node, alpha_node_[node]);
        }
        for (auto e : touched_) {
            if (local_[e] == Local::none) {
                continue;
            }
            const double kappa = local_[e] == Local::z ? -1.0 : 1.0;
            consider(local_[e] == Local::z ? zvar(e) : slack(e), rhs_[e] / kappa);
        }

        if (std::isinf(best)) {
            throw Error(ErrorCode::NumericalFailure, "relaxation reported unbounded");
        }
        const double theta = std::max(0.0, best);

        x_[q] += sigma * theta;
        for (auto node : order_) {
            x_[node] -= sigma * theta * alpha_node_[node];
        }
        for (auto e : touched_) {
            if (local_[e] == Local::none) {
                continue;
            }
            const double kappa = local_[e] == Local::z ? -1.0 : 1.0;
            const std::size_t var = local_[e] == Local::z ? zvar(e) : slack(e);
            x_[var] -= sigma * theta * rhs_[e] / kappa;
        }

        if (leaving == npos) {
            // Bound flip: the basis is unchanged.
            x_[q] = sigma > 0 ? upper(q) : 0.0;
            return;
        }

        x_[leaving] = leaving_delta < 0 ? 0.0 : upper(leaving);
        set_basic(leaving, false);
        set_basic(q, true);
    }

    void set_basic(std::size_t var, bool basic) {
        if (var < nodes_) {
            node_basic_[var] = basic;
        } else if (var < nodes_ + E_) {
            const std::size_t e = var - nodes_;
            if (basic) {
                local_[e] = Local::z;
            } else if (local_[e] == Local::z) {
                local_[e] = Local::none;
            }
        } else {
            const std::size_t e = var - nodes_ - E_;
            if (basic) {
                local_[e] = Local::slack;
            } else if (local_[e] == Local::slack) {
                local_[e] = Local::none;
            }
        }
    }

    const LpProblem& p_;
    std::size_t m_, n_, E_, nodes_ = 0, total_ = 0;
    std::vector<std::size_t> node_ptr_, node_rows_;
    std::vector<double> cost_, x_;
    std::vector<std::uint8_t> node_basic_;
    std::vector<Local> local_;

    std::vector<double> y_;
    std::vector<std::size_t> parent_edge_, order_, adj_ptr_, adj_, anchors_, r_rows_;
    std::vector<std::uint8_t> visited_;
    double direction_ = 1.0;

    std::vector<double> alpha_node_, rhs_;
    std::vector<std::size_t> touched_;
    std::vector<std::uint8_t> touched_flag_;
};

/// Dinic max-flow on integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t nodes) : head_(nodes, npos) {}

    void add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
        arcs_.push_back(Arc{to, head_[from], cap});
        head_[from] = arcs_.size() - 1;
        arcs_.push_back(Arc{from, head_[to], 0});
        head_[to] = arcs_.size() - 1;
    }

    std::int64_t run(std::size_t s, std::size_t t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            ++phases_;
            iter_ = head_;
            while (auto pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) {
                flow += pushed;
            }
        }
        return flow;
    }

    /// Nodes reachable from `s` in the final residual graph.
    std::vector<std::uint8_t> source_side(std::size_t s) const {
        std::vector<std::uint8_t> seen(head_.size(), 0);
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto a = head_[v]; a != npos; a = arcs_[a].next) {
                if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
                    seen[arcs_[a].to] = 1;
                    stack.push_back(arcs_[a].to);
                }
            }
        }
        return seen;
    }

    std::size_t phases() const { return phases_; }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    struct Arc {
        std::size_t to;
        std::size_t next;
        std::int64_t cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        level_.assign(head_.size(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto a = head_[v]; a != npos; a = arcs_[a].next) {
                if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[v] + 1;
                    q.push(arcs_[a].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    // Iterative blocking-flow search; returns the amount pushed along one path.
    std::int64_t dfs(std::size_t s, std::size_t t, std::int64_t limit) {
        path_.clear();
        std::size_t v = s;
        while (true) {
            if (v == t) {
                std::int64_t f = limit;
                for (auto a : path_) {
                    f = std::min(f, arcs_[a].cap);
                }
                for (auto a : path_) {
                    arcs_[a].cap -= f;
                    arcs_[a ^ 1].cap += f;
                }
                return f;
            }
            bool advanced = false;
            for (auto& a = iter_[v]; a != npos; a = arcs_[a].next) {
                const auto& arc = arcs_[a];
                if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
                    path_.push_back(a);
                    v = arc.to;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                if (path_.empty()) {
                    return 0;
                }
                level_[v] = -1;
                const auto back = path_.back();
                path_.pop_back();
                v = arcs_[back ^ 1].to;
                iter_[v] = arcs_[iter_[v]].next;
            }
        }
    }

    std::vector<std::size_t> head_, iter_, path_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::size_t phases_ = 0;
};

inline Rank1Solution finish_solution(const LpProblem& p, std::vector<double> raw, std::size_t iterations,
                                     LpEngine engine) {
    Rank1Solution out;
    out.engine = engine;
    out.iterations = iterations;
    out.objective = p.evaluate(raw);
    for (double value : raw) {
        out.max_integrality_gap = std::max(out.max_integrality_gap, std::abs(value - std::round(value)));
    }
    if (out.max_integrality_gap > lp_tolerance) {
        throw Error(ErrorCode::NumericalFailure,
                    "fractional vertex, integrality gap " + std::to_string(out.max_integrality_gap));
    }
    out.tile.u.assign(p.m, 0);
    out.tile.v.assign(p.n, 0);
    // Zero preference: a u/v with no observed ones never helps the objective.
    for (std::size_t i = 0; i < p.m; ++i) {
        out.tile.u[i] = raw[i] > 0.5 && p.row_ones[i] > 0;
    }
    for (std::size_t j = 0; j < p.n; ++j) {
        out.tile.v[j] = raw[p.m + j] > 0.5 && p.col_ones[j] > 0;
    }
    out.raw_values = std::move(raw);
    return out;
}

}

inline Rank1Solution solve_simplex(const LpProblem& p, std::size_t max_pivots = 0) {
    if (max_pivots == 0) {
        max_pivots = 10 * (p.num_variables() + p.num_constraints());
    }
    detail::ForestSimplex solver(p);
    const std::size_t pivots = solver.run(max_pivots);
    return detail::finish_solution(p, solver.structural_values(), pivots, LpEngine::simplex);
}

/**
 * Solves the same relaxation through its dual, a bipartite max-flow
 * (source -> row i with capacity |Omega1 in row i|, row i -> col j with
 * capacity 2 for each observed zero, col j -> sink with |Omega1 in col j|,
 * all doubled to stay integral). Rows on the source side of the minimum cut
 * get u_i = 1 and columns on the sink side get v_j = 1.
 */
inline Rank1Solution solve_mincut(const LpProblem& p) {
    const std::size_t source = 0;
    const std::size_t sink = p.m + p.n + 1;
    detail::MaxFlow graph(p.m + p.n + 2);
    for (std::size_t i = 0; i < p.m; ++i) {
        if (p.row_ones[i] > 0) {
            graph.add_edge(source, 1 + i, p.row_ones[i]);
        }
    }
    for (const auto& [i, j] : p.zero_entries) {
        graph.add_edge(1 + i, 1 + p.m + j, 2);
    }
    for (std::size_t j = 0; j < p.n; ++j) {
        if (p.col_ones[j] > 0) {
            graph.add_edge(1 + p.m + j, sink, p.col_ones[j]);
        }
    }
    const std::int64_t flow = graph.run(source, sink);
    const auto side = graph.source_side(source);

    std::vector<double> raw(p.num_variables(), 0.0);
    for (std::size_t i = 0; i < p.m; ++i) {
        raw[i] = side[1 + i] ? 1.0 : 0.0;
    }
    for (std::size_t j = 0; j < p.n; ++j) {
        raw[p.m + j] = side[1 + p.m + j] ? 0.0 : 1.0;
    }
    for (std::size_t e = 0; e < p.zero_entries.size(); ++e) {
        const auto [i, j] = p.zero_entries[e];
        raw[p.m + p.n + e] = std::max(0.0, raw[i] + raw[p.m + j] - 1.0);
    }
    auto out = detail::finish_solution(p, std::move(raw), graph.phases(), LpEngine::mincut);

    double total_ones = 0;
    for (auto c : p.row_ones) {
        total_ones += c;
    }
    const double dual_value = total_ones - 0.5 * static_cast<double>(flow);
    if (std::abs(dual_value - out.objective) > 1e-6) {
        throw Error(ErrorCode::NumericalFailure, "cut value disagrees with the flow bound");
    }
    return out;
}

inline Rank1Solution solve_lp(const LpProblem& p, const LpOptions& opts = {}) {
    LpEngine engine = opts.engine;
    if (engine == LpEngine::automatic) {
        engine = p.num_constraints() <= opts.simplex_constraint_limit ? LpEngine::simplex : LpEngine::mincut;
    }
    return engine == LpEngine::simplex ? solve_simplex(p, opts.max_pivots) : solve_mincut(p);
}

/// Rank-one tile of a view from the LP relaxation.
inline Rank1Solution lp_rank1(const RowSubsetView& view, const LpOptions& opts = {}) {
    return solve_lp(build_lp(view), opts);
}

inline Rank1Solution lp_rank1(const ObservedBinaryMatrix& m, const LpOptions& opts = {}) {
    return lp_rank1(RowSubsetView(m), opts);
}

/// Writes the relaxation in CPLEX LP text format, for cross-checking with external solvers.
inline void write_lp(std::ostream& out, const LpProblem& p) {
    out << "\\ rank-one binary relaxation: " << p.m << " rows, " << p.n << " cols, " << p.num_constraints()
        << " observed zeros\n";
    out << "Maximize\n obj:";
    bool any = false;
    auto term = [&](double coef, const std::string& name) {
        if (coef == 0) {
            return;
        }
        out << (coef < 0 ? " - " : (any ? " + " : " ")) << std::abs(coef) << " " << name;
        any = true;
    };
    for (std::size_t i = 0; i < p.m; ++i) {
        term(0.5 * p.row_ones[i], "u" + std::to_string(i));
    }
    for (std::size_t j = 0; j < p.n; ++j) {
        term(0.5 * p.col_ones[j], "v" + std::to_string(j));
    }
    for (std::size_t e = 0; e < p.num_constraints(); ++e) {
        term(-1.0, "z" + std::to_string(e));
    }
    if (!any) {
        out << " 0 u0";
    }
    out << "\nSubject To\n";
    for (std::size_t e = 0; e < p.num_constraints(); ++e) {
        const auto [i, j] = p.zero_entries[e];
        out << " c" << e << ": u" << i << " + v" << j << " - z" << e << " <= 1\n";
    }
    out << "Bounds\n";
    for (std::size_t i = 0; i < p.m; ++i) {
        out << " 0 <= u" << i << " <= 1\n";
    }
    for (std::size_t j = 0; j < p.n; ++j) {
        out << " 0 <= v" << j << " <= 1\n";
    }
    for (std::size_t e = 0; e < p.num_constraints(); ++e) {
        out << " 0 <= z" << e << " <= 1\n";
    }
    out << "End\n";
}

}

#endif
