#include "test_support.hpp"

#include "tbmc/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tbmc;
using tbmc::support::bits;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("tbmc_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

ObservedBinaryMatrix from_text(const std::string& text) {
    std::istringstream in(text);
    return read_triplets_csv(in);
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoError;
}

bool same(const ObservedBinaryMatrix& a, const ObservedBinaryMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.observed() != b.observed()) {
        return false;
    }
    auto ta = a.triplets();
    auto tb = b.triplets();
    for (std::size_t k = 0; k < ta.size(); ++k) {
        if (ta[k].row != tb[k].row || ta[k].col != tb[k].col || ta[k].bit != tb[k].bit) {
            return false;
        }
    }
    return true;
}

}

TEST(TripletCsv, InfersShape) {
    auto m = from_text("row,col,value\n0,0,1\n1,1,0\n");
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 2u);
    EXPECT_EQ(m.observed(), 2u);
    EXPECT_EQ(m.at(1, 1), Bit{0});
}

TEST(TripletCsv, DeclaredShapeOverridesInference) {
    auto m = from_text("# rows=5 cols=7\nrow,col,value\n0,0,1\n");
    EXPECT_EQ(m.rows(), 5u);
    EXPECT_EQ(m.cols(), 7u);
}

TEST(TripletCsv, EmptyDataSection) {
    auto m = from_text("row,col,value\n");
    EXPECT_EQ(m.rows(), 0u);
    EXPECT_EQ(m.observed(), 0u);
    auto d = from_text("# rows=3 cols=2\nrow,col,value\n");
    EXPECT_EQ(d.rows(), 3u);
    EXPECT_EQ(d.observed(), 0u);
}

TEST(TripletCsv, Errors) {
    EXPECT_EQ(code_of([] { from_text("row,col,value\n0,0,3\n"); }), ErrorCode::ValueOutOfDomain);
    EXPECT_EQ(code_of([] { from_text("row,col,value\n0,0,1\n0,0,0\n"); }), ErrorCode::DuplicateEntry);
    EXPECT_EQ(code_of([] { from_text("row,col,value\n0,x,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { from_text("row,col,value\n0,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { from_text("i,j,v\n0,0,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { from_text("row,col,value\n-1,0,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { from_text("# rows=1 cols=1\nrow,col,value\n2,0,1\n"); }), ErrorCode::IndexOutOfRange);
    EXPECT_EQ(code_of([] { read_triplets_csv(std::string("/nonexistent/file.csv")); }), ErrorCode::IoError);
}

TEST(TripletCsv, ParseErrorNamesTheLine) {
    try {
        from_text("row,col,value\n0,0,1\n\n1,oops,0\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
    }
}

TEST(TripletCsv, RoundTripOnRandomMatrices) {
    Engine rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = support::random_matrix(rng, 1 + trial % 9, 1 + trial % 6, 0.5, 0.5);
        std::ostringstream out;
        write_triplets_csv(out, m);
        EXPECT_TRUE(same(from_text(out.str()), m));
    }
}

TEST(TripletCsv, LineOrderDoesNotMatter) {
    Engine rng(13);
    auto m = support::random_matrix(rng, 8, 8, 0.6, 0.5);
    std::ostringstream out;
    write_triplets_csv(out, m);
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> head, body;
    while (std::getline(in, line)) {
        (head.size() < 2 ? head : body).push_back(line);
    }
    std::shuffle(body.begin(), body.end(), rng);
    std::string shuffled;
    for (const auto& l : head) shuffled += l + "\n";
    for (const auto& l : body) shuffled += l + "\n";
    EXPECT_TRUE(same(from_text(shuffled), m));
}

TEST(MovieLens, ThresholdAndRemapping) {
    std::istringstream in("1\t5\t4\t881250949\n1\t2\t3\t881250950\n7\t5\t5\t881250951\n");
    auto ds = read_movielens(in);
    EXPECT_EQ(ds.matrix.rows(), 2u);
    EXPECT_EQ(ds.matrix.cols(), 2u);
    EXPECT_EQ(ds.user_ids, (std::vector<std::int64_t>{1, 7}));
    EXPECT_EQ(ds.item_ids, (std::vector<std::int64_t>{2, 5}));
    EXPECT_EQ(ds.matrix.at(0, 1), Bit{1});  // user 1, item 5, rating 4
    EXPECT_EQ(ds.matrix.at(0, 0), Bit{0});  // rating 3 is an observed zero
    EXPECT_EQ(ds.matrix.at(1, 1), Bit{1});
    EXPECT_FALSE(ds.matrix.at(1, 0).has_value());
}

TEST(MovieLens, CustomThreshold) {
    std::istringstream in("1 1 3\n1 2 2\n");
    auto ds = read_movielens(in, 3.0);
    EXPECT_EQ(ds.matrix.at(0, 0), Bit{1});
    EXPECT_EQ(ds.matrix.at(0, 1), Bit{0});
}

TEST(MovieLens, Errors) {
    EXPECT_EQ(code_of([] {
                  std::istringstream in("1\t5\t4\t1\n1\t5\t2\t2\n");
                  read_movielens(in);
              }),
              ErrorCode::DuplicateEntry);
    EXPECT_EQ(code_of([] {
                  std::istringstream in("1\t5\n");
                  read_movielens(in);
              }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] {
                  std::istringstream in("a\t5\t4\t1\n");
                  read_movielens(in);
              }),
              ErrorCode::ParseError);
}

TEST(MovieLens, LineOrderDoesNotMatter) {
    std::istringstream a("3 9 5 0\n1 4 2 0\n2 9 4 0\n");
    std::istringstream b("2 9 4 0\n3 9 5 0\n1 4 2 0\n");
    auto da = read_movielens(a);
    auto db = read_movielens(b);
    EXPECT_TRUE(same(da.matrix, db.matrix));
    EXPECT_EQ(da.user_ids, db.user_ids);
}

TEST(TilingFiles, SingleFullTile) {
    auto dir = scratch_dir("full");
    write_tiling(support::single_tile(bits("11"), bits("11")), dir.string());
    std::ifstream u(dir / "U.csv");
    std::stringstream text;
    text << u.rdbuf();
    EXPECT_EQ(text.str(), "tile_0\n1\n1\n");
    auto back = read_tiling(dir.string());
    EXPECT_EQ(back, support::single_tile(bits("11"), bits("11")));
}

TEST(TilingFiles, EmptyTilingKeepsShape) {
    auto dir = scratch_dir("empty");
    Tiling t{3, 4, {}};
    write_tiling(t, dir.string());
    auto back = read_tiling(dir.string());
    EXPECT_EQ(back, t);
}

TEST(TilingFiles, RoundTripOnRandomTilings) {
    Engine rng(21);
    auto dir = scratch_dir("random");
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t rows = 1 + uniform_below(rng, 10);
        const std::size_t cols = 1 + uniform_below(rng, 10);
        Tiling t{rows, cols, {}};
        const std::size_t k = uniform_below(rng, 4);
        for (std::size_t c = 0; c < k; ++c) {
            Tile tile;
            tile.u.resize(rows);
            tile.v.resize(cols);
            for (auto& b : tile.u) b = bernoulli(rng, 0.3);
            for (auto& b : tile.v) b = bernoulli(rng, 0.5);
            t.tiles.push_back(tile);
        }
        write_tiling(t, dir.string());
        EXPECT_EQ(read_tiling(dir.string()), t);
    }
}

TEST(TilingFiles, Errors) {
    EXPECT_EQ(code_of([] { read_tiling("/nonexistent/dir"); }), ErrorCode::IoError);
    auto dir = scratch_dir("bad");
    {
        std::ofstream(dir / "U.csv") << "tile_0\n2\n";
        std::ofstream(dir / "V.csv") << "tile_0\n1\n";
    }
    EXPECT_EQ(code_of([&] { read_tiling(dir.string()); }), ErrorCode::ParseError);
    {
        std::ofstream(dir / "U.csv") << "tile_0,tile_1\n1,0\n";
        std::ofstream(dir / "V.csv") << "tile_0\n1\n";
    }
    EXPECT_EQ(code_of([&] { read_tiling(dir.string()); }), ErrorCode::ParseError);
}
