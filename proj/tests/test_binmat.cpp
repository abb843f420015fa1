#include "test_support.hpp"

#include "tbmc/binmat.hpp"
#include "tbmc/tiling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace tbmc;
using tbmc::support::bits;
using tbmc::support::parse_matrix;

TEST(FromTriplets, BuildsBothIndexes) {
    auto m = ObservedBinaryMatrix::from_triplets(2, 2, {{0, 0, 1}, {1, 1, 1}});
    EXPECT_EQ(m.observed(), 2u);
    EXPECT_EQ(m.ones(), 2u);
    EXPECT_EQ(m.at(0, 0), Bit{1});
    EXPECT_FALSE(m.at(0, 1).has_value());
    ASSERT_EQ(m.col(1).size(), 1u);
    EXPECT_EQ(m.col(1)[0].row, 1u);
}

TEST(FromTriplets, EmptyMask) {
    auto m = ObservedBinaryMatrix::from_triplets(1, 1, {});
    EXPECT_EQ(m.rows(), 1u);
    EXPECT_EQ(m.observed(), 0u);
    EXPECT_TRUE(m.row(0).empty());
}

TEST(FromTriplets, RejectsDuplicates) {
    try {
        ObservedBinaryMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 0, 0}});
        FAIL() << "expected DuplicateEntry";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateEntry);
    }
}

TEST(FromTriplets, RejectsOutOfRangeAndNonBinary) {
    try {
        ObservedBinaryMatrix::from_triplets(2, 2, {{2, 0, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
    try {
        ObservedBinaryMatrix::from_triplets(2, 2, {{0, 0, 2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValueOutOfDomain);
    }
}

TEST(FromTriplets, RowAndColumnIndexesAgreeOnRandomInput) {
    Engine rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = support::random_matrix(rng, 1 + trial % 7, 1 + trial % 5, 0.6, 0.5);
        std::set<std::tuple<std::size_t, std::size_t, int>> by_row, by_col;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (auto e : m.row(i)) {
                by_row.insert({i, e.col, e.bit});
            }
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            for (auto e : m.col(j)) {
                by_col.insert({e.row, j, e.bit});
            }
        }
        EXPECT_EQ(by_row, by_col);
        EXPECT_EQ(by_row.size(), m.observed());
    }
}

TEST(FromTriplets, InputOrderDoesNotMatter) {
    std::vector<Triplet> t{{1, 2, 1}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    auto a = ObservedBinaryMatrix::from_triplets(2, 3, t);
    std::reverse(t.begin(), t.end());
    auto b = ObservedBinaryMatrix::from_triplets(2, 3, t);
    auto ta = a.triplets();
    auto tb = b.triplets();
    ASSERT_EQ(ta.size(), tb.size());
    for (std::size_t k = 0; k < ta.size(); ++k) {
        EXPECT_EQ(ta[k].row, tb[k].row);
        EXPECT_EQ(ta[k].col, tb[k].col);
        EXPECT_EQ(ta[k].bit, tb[k].bit);
    }
}

TEST(ScaledHamming, Examples) {
    auto m = parse_matrix("100");
    EXPECT_DOUBLE_EQ(scaled_hamming(m, 0, bits("110")), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(scaled_hamming(m, 0, bits("100")), 0.0);
    EXPECT_DOUBLE_EQ(scaled_hamming(m, 0, bits("011")), 1.0);
}

TEST(ScaledHamming, OnlyObservedPositionsCount) {
    auto m = parse_matrix("1?0?");
    EXPECT_DOUBLE_EQ(scaled_hamming(m, 0, bits("1101")), 0.0);
    EXPECT_DOUBLE_EQ(scaled_hamming(m, 0, bits("0111")), 1.0);
}

TEST(ScaledHamming, EmptyRowIsAnError) {
    auto m = parse_matrix("??;1?");
    try {
        scaled_hamming(m, 0, bits("11"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyRow);
    }
    EXPECT_THROW(scaled_hamming(m, 1, bits("1")), Error);
}

TEST(ScaledHamming, RangeAndZeroIffAgreementProperty) {
    Engine rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = support::random_matrix(rng, 3, 6, 0.7, 0.5);
        BitVector v(6);
        for (auto& b : v) {
            b = bernoulli(rng, 0.5);
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (m.row(i).empty()) {
                continue;
            }
            const double d = scaled_hamming(m, i, v);
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 1.0);
            bool agrees = true;
            for (auto e : m.row(i)) {
                agrees = agrees && v[e.col] == e.bit;
            }
            EXPECT_EQ(d == 0.0, agrees);
        }
    }
}

TEST(MaskedError, Examples) {
    auto zeros = parse_matrix("00;00");
    Tiling empty{2, 2, {}};
    EXPECT_EQ(masked_error(zeros, empty), 0u);

    auto ones = parse_matrix("11;11");
    EXPECT_EQ(masked_error(ones, support::single_tile(bits("11"), bits("11"))), 0u);

    auto eye = parse_matrix("10;01");
    EXPECT_EQ(masked_error(eye, support::single_tile(bits("10"), bits("10"))), 1u);
}

TEST(MaskedError, DimensionMismatch) {
    auto m = parse_matrix("10;01");
    Tiling t{3, 2, {}};
    try {
        masked_error(m, t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

// Dense reconstruction U V^T compared cell by cell on matrices up to 8x8.
TEST(MaskedError, MatchesDenseReconstruction) {
    Engine rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m_rows = 1 + uniform_below(rng, 8);
        const std::size_t n_cols = 1 + uniform_below(rng, 8);
        auto m = support::random_matrix(rng, m_rows, n_cols, 0.6, 0.5);
        // Random row partition into up to 3 tiles.
        const std::size_t k = 1 + uniform_below(rng, 3);
        Tiling t{m_rows, n_cols, {}};
        for (std::size_t c = 0; c < k; ++c) {
            Tile tile;
            tile.u.assign(m_rows, 0);
            tile.v.assign(n_cols, 0);
            for (auto& b : tile.v) {
                b = bernoulli(rng, 0.5);
            }
            t.tiles.push_back(tile);
        }
        for (std::size_t i = 0; i < m_rows; ++i) {
            const auto owner = uniform_below(rng, k + 1);
            if (owner < k) {
                t.tiles[owner].u[i] = 1;
            }
        }
        ASSERT_TRUE(is_row_partition(t));
        std::size_t expected = 0;
        for (std::size_t i = 0; i < m_rows; ++i) {
            for (std::size_t j = 0; j < n_cols; ++j) {
                int uv = 0;
                for (const auto& tile : t.tiles) {
                    uv += tile.u[i] * tile.v[j];
                }
                ASSERT_LE(uv, 1);
                if (auto a = m.at(i, j)) {
                    expected += (*a - uv) * (*a - uv);
                }
            }
        }
        EXPECT_EQ(masked_error(m, t), expected);
    }
}

TEST(SplitRows, Examples) {
    auto m = parse_matrix("1;0;1");
    RowSubsetView all(m);
    {
        auto [b1, b0] = split_rows(all, bits("111"));
        EXPECT_EQ(b1.parent_rows(), (std::vector<std::size_t>{0, 1, 2}));
        EXPECT_TRUE(b0.empty());
    }
    {
        auto [b1, b0] = split_rows(all, bits("000"));
        EXPECT_TRUE(b1.empty());
        EXPECT_EQ(b0.rows(), 3u);
    }
    {
        auto [b1, b0] = split_rows(all, bits("101"));
        EXPECT_EQ(b1.parent_rows(), (std::vector<std::size_t>{0, 2}));
        EXPECT_EQ(b0.parent_rows(), (std::vector<std::size_t>{1}));
    }
}

TEST(SplitRows, NestedViewsKeepParentIds) {
    auto m = parse_matrix("1;0;1;1;0");
    RowSubsetView sub(m, {4, 2, 0});
    auto [b1, b0] = split_rows(sub, bits("011"));
    EXPECT_EQ(b1.parent_rows(), (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(b0.parent_rows(), (std::vector<std::size_t>{4}));
    EXPECT_EQ(b1.row(0)[0].bit, 1);
}

TEST(SplitRows, DisjointAndExhaustiveProperty) {
    Engine rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + uniform_below(rng, 12);
        auto m = support::random_matrix(rng, rows, 3, 0.5, 0.5);
        RowSubsetView v(m);
        BitVector u(rows);
        for (auto& b : u) {
            b = bernoulli(rng, 0.5);
        }
        auto [b1, b0] = split_rows(v, u);
        std::vector<std::size_t> merged = b1.parent_rows();
        merged.insert(merged.end(), b0.parent_rows().begin(), b0.parent_rows().end());
        std::sort(merged.begin(), merged.end());
        EXPECT_EQ(merged, v.parent_rows());
        EXPECT_EQ(b1.rows(), count_ones(u));
    }
}

TEST(SplitRows, LengthMismatchThrows) {
    auto m = parse_matrix("1;0");
    EXPECT_THROW(split_rows(RowSubsetView(m), bits("1")), Error);
}

TEST(Predict, Examples) {
    Tiling empty{2, 2, {}};
    EXPECT_EQ(predict(empty, 1, 1), 0);
    auto full = support::single_tile(bits("11"), bits("11"));
    EXPECT_EQ(predict(full, 0, 1), 1);

    Tiling blocks{4, 4, {}};
    blocks.tiles.push_back(Tile{bits("1100"), bits("1100")});
    blocks.tiles.push_back(Tile{bits("0011"), bits("0011")});
    EXPECT_EQ(predict(blocks, 0, 3), 0);
    EXPECT_EQ(predict(blocks, 3, 3), 1);
    try {
        predict(blocks, 4, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
}

TEST(RowPartition, DetectsOverlap) {
    Tiling t{2, 1, {}};
    t.tiles.push_back(Tile{bits("11"), bits("1")});
    EXPECT_TRUE(is_row_partition(t));
    t.tiles.push_back(Tile{bits("01"), bits("1")});
    EXPECT_FALSE(is_row_partition(t));
}
