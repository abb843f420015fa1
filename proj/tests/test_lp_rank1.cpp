#include "test_support.hpp"

#include "tbmc/lp_rank1.hpp"
#include "tbmc/oracle.hpp"
#include "tbmc/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace tbmc;
using tbmc::support::bits;
using tbmc::support::parse_matrix;

namespace {

LpOptions engine(LpEngine e) {
    LpOptions o;
    o.engine = e;
    return o;
}

}

TEST(BuildLp, AllOnes) {
    auto p = build_lp(parse_matrix("11;11"));
    EXPECT_EQ(p.num_variables(), 4u);
    EXPECT_EQ(p.num_constraints(), 0u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_DOUBLE_EQ(p.objective_coefficient(k), 1.0);
    }
}

TEST(BuildLp, Identity) {
    auto p = build_lp(parse_matrix("10;01"));
    EXPECT_EQ(p.num_variables(), 6u);
    EXPECT_EQ(p.num_constraints(), 2u);
    EXPECT_EQ(p.zero_entries[0], (std::pair<std::uint32_t, std::uint32_t>{0, 1}));
    EXPECT_EQ(p.zero_entries[1], (std::pair<std::uint32_t, std::uint32_t>{1, 0}));
    EXPECT_DOUBLE_EQ(p.objective_coefficient(4), -1.0);
}

TEST(BuildLp, EmptyMask) {
    auto p = build_lp(parse_matrix("??;??;??"));
    EXPECT_EQ(p.num_variables(), 5u);
    EXPECT_EQ(p.num_constraints(), 0u);
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
        EXPECT_EQ(p.objective_coefficient(k), 0.0);
    }
}

TEST(BuildLp, CoefficientsAreHalfTheOnesCount) {
    auto m = parse_matrix("1101;0?11;1000");
    auto p = build_lp(m);
    EXPECT_DOUBLE_EQ(p.objective_coefficient(0), 1.5);
    EXPECT_DOUBLE_EQ(p.objective_coefficient(1), 1.0);
    EXPECT_DOUBLE_EQ(p.objective_coefficient(2), 0.5);
    EXPECT_DOUBLE_EQ(p.objective_coefficient(3 + 0), 1.0);
    EXPECT_DOUBLE_EQ(p.objective_coefficient(3 + 3), 1.0);
    EXPECT_EQ(p.num_constraints(), m.observed() - m.ones());
}

class BothEngines : public ::testing::TestWithParam<LpEngine> {};

TEST_P(BothEngines, AllOnes) {
    auto s = lp_rank1(parse_matrix("11;11"), engine(GetParam()));
    EXPECT_DOUBLE_EQ(s.objective, 4.0);
    EXPECT_EQ(s.tile.u, bits("11"));
    EXPECT_EQ(s.tile.v, bits("11"));
    EXPECT_LE(s.max_integrality_gap, 1e-9);
}

TEST_P(BothEngines, IdentityHasObjectiveOne) {
    auto m = parse_matrix("10;01");
    auto s = lp_rank1(m, engine(GetParam()));
    EXPECT_DOUBLE_EQ(s.objective, 1.0);
    // Any optimal vertex is within the factor-two guarantee of the optimum (1).
    EXPECT_LE(tile_error(m, s.tile), 2u);
}

TEST_P(BothEngines, SingleObservedZero) {
    auto s = lp_rank1(parse_matrix("0"), engine(GetParam()));
    EXPECT_DOUBLE_EQ(s.objective, 0.0);
    EXPECT_EQ(s.tile.u, bits("0"));
    EXPECT_EQ(s.tile.v, bits("0"));
}

TEST_P(BothEngines, EmptyMaskGivesEmptyTile) {
    auto s = lp_rank1(parse_matrix("???;???"), engine(GetParam()));
    EXPECT_DOUBLE_EQ(s.objective, 0.0);
    EXPECT_EQ(count_ones(s.tile.u), 0u);
    EXPECT_EQ(count_ones(s.tile.v), 0u);
}

TEST_P(BothEngines, UnobservedLinesAreLeftOutOfTheTile) {
    auto m = parse_matrix("11?;11?;???");
    auto s = lp_rank1(m, engine(GetParam()));
    EXPECT_EQ(s.tile.u, bits("110"));
    EXPECT_EQ(s.tile.v, bits("110"));
}

TEST_P(BothEngines, NoiselessPlantedTileRecovered) {
    // 20x20 with a 10x10 tile on rows 0..9 and columns 5..14.
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            t.push_back({i, j, static_cast<Bit>(i < 10 && j >= 5 && j < 15)});
        }
    }
    auto m = ObservedBinaryMatrix::from_triplets(20, 20, t);
    auto s = lp_rank1(m, engine(GetParam()));
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(s.tile.u[i], i < 10);
        EXPECT_EQ(s.tile.v[i], i >= 5 && i < 15);
    }
    EXPECT_EQ(tile_error(m, s.tile), 0u);
}

TEST_P(BothEngines, ObjectiveMatchesRawValues) {
    Engine rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = support::random_matrix(rng, 2 + trial % 5, 2 + trial % 4, 0.7, 0.5);
        auto p = build_lp(m);
        auto s = solve_lp(p, engine(GetParam()));
        ASSERT_EQ(s.raw_values.size(), p.num_variables());
        EXPECT_NEAR(p.evaluate(s.raw_values), s.objective, 1e-9);
        // Feasibility of the raw point.
        for (std::size_t k = 0; k < p.num_constraints(); ++k) {
            const auto [i, j] = p.zero_entries[k];
            EXPECT_LE(s.raw_values[i] + s.raw_values[p.m + j] - s.raw_values[p.m + p.n + k], 1.0 + 1e-9);
        }
        for (double x : s.raw_values) {
            EXPECT_GE(x, -1e-9);
            EXPECT_LE(x, 1.0 + 1e-9);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Engines, BothEngines, ::testing::Values(LpEngine::simplex, LpEngine::mincut),
                         [](const auto& info) { return std::string(to_string(info.param)); });

// The relaxation's optimum equals the best binary value found by exhaustive
// search (integral vertices), for both solvers, on 500 small instances.
TEST(LpOptimum, MatchesExhaustiveSearch) {
    Engine rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m_rows = 1 + uniform_below(rng, 6);
        const std::size_t n_cols = 1 + uniform_below(rng, 6);
        auto m = support::random_matrix(rng, m_rows, n_cols, 0.2 + 0.8 * uniform01(rng), uniform01(rng));
        const auto brute = support::brute_force(m);
        const auto simplex = lp_rank1(m, engine(LpEngine::simplex));
        const auto cut = lp_rank1(m, engine(LpEngine::mincut));
        ASSERT_NEAR(simplex.objective, brute.best_relaxed_objective, 1e-9) << "trial " << trial;
        ASSERT_NEAR(cut.objective, brute.best_relaxed_objective, 1e-9) << "trial " << trial;
        EXPECT_LE(simplex.max_integrality_gap, 1e-9);
        EXPECT_LE(cut.max_integrality_gap, 1e-9);
    }
}

// Upper bound and factor-two guarantee against the exact optimum, m, n <= 6.
TEST(LpOptimum, BoundsTheBinaryObjectiveAndIsWithinFactorTwo) {
    Engine rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m_rows = 1 + uniform_below(rng, 6);
        const std::size_t n_cols = 1 + uniform_below(rng, 6);
        auto m = support::random_matrix(rng, m_rows, n_cols, 0.3 + 0.7 * uniform01(rng), 0.5);
        const auto best = exact_rank1(m);
        for (auto e : {LpEngine::simplex, LpEngine::mincut}) {
            const auto s = lp_rank1(m, engine(e));
            EXPECT_GE(s.objective + 1e-9, static_cast<double>(best.objective));
            EXPECT_LE(tile_error(m, s.tile), 2 * best.error) << "trial " << trial;
        }
    }
}

// For the rounded tile the binary objective sum_{ones} u_i v_j - sum_{zeros}
// u_i v_j equals |ones| - error; the relaxation's value is never below it.
TEST(LpOptimum, ErrorIdentityOnTheRoundedTile) {
    Engine rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = support::random_matrix(rng, 5, 5, 0.8, 0.5);
        const auto s = lp_rank1(m);
        long long binary_obj = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (auto e : m.row(i)) {
                const int p = s.tile.u[i] & s.tile.v[e.col];
                binary_obj += e.bit ? p : -p;
            }
        }
        EXPECT_EQ(tile_error(m, s.tile), m.ones() - static_cast<std::size_t>(binary_obj));
        EXPECT_GE(s.objective + 1e-9, static_cast<double>(binary_obj));
    }
}

TEST(LpEngines, AgreeOnPlantedInstances) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PlantedSpec spec{60, 50, 3, 0.6, 0.03, 0.7, seed};
        auto inst = gen_planted(spec);
        const auto a = lp_rank1(inst.observed, engine(LpEngine::simplex));
        const auto b = lp_rank1(inst.observed, engine(LpEngine::mincut));
        EXPECT_NEAR(a.objective, b.objective, 1e-9);
        EXPECT_LE(a.max_integrality_gap, 1e-9);
    }
}

TEST(LpSolve, Deterministic) {
    Engine rng(3);
    auto m = support::random_matrix(rng, 12, 9, 0.7, 0.5);
    for (auto e : {LpEngine::simplex, LpEngine::mincut}) {
        const auto a = lp_rank1(m, engine(e));
        const auto b = lp_rank1(m, engine(e));
        EXPECT_EQ(a.tile.u, b.tile.u);
        EXPECT_EQ(a.tile.v, b.tile.v);
        EXPECT_EQ(a.raw_values, b.raw_values);
        EXPECT_EQ(a.iterations, b.iterations);
    }
}

TEST(LpSolve, AutomaticPicksEngineBySize) {
    auto m = parse_matrix("10;01");
    LpOptions o;
    EXPECT_EQ(lp_rank1(m, o).engine, LpEngine::simplex);
    o.simplex_constraint_limit = 1;
    EXPECT_EQ(lp_rank1(m, o).engine, LpEngine::mincut);
}

TEST(LpSolve, PivotCapRaisesNumericalFailure) {
    Engine rng(8);
    auto m = support::random_matrix(rng, 10, 10, 0.9, 0.5);
    LpOptions o = engine(LpEngine::simplex);
    o.max_pivots = 1;
    try {
        lp_rank1(m, o);
        FAIL() << "expected NumericalFailure";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NumericalFailure);
    }
}

TEST(WriteLp, ListsEveryConstraintAndBound) {
    std::ostringstream out;
    write_lp(out, build_lp(parse_matrix("10;01")));
    const auto text = out.str();
    EXPECT_NE(text.find("Maximize"), std::string::npos);
    EXPECT_NE(text.find("Subject To"), std::string::npos);
    EXPECT_NE(text.find("Bounds"), std::string::npos);
    EXPECT_NE(text.find("End"), std::string::npos);
    EXPECT_NE(text.find("c0: u0 + v1 - z0 <= 1"), std::string::npos);
    EXPECT_NE(text.find("c1: u1 + v0 - z1 <= 1"), std::string::npos);
    EXPECT_NE(text.find("0 <= z1 <= 1"), std::string::npos);
}
