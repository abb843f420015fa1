#ifndef TBMC_IO_HPP
#define TBMC_IO_HPP

#include "binmat.hpp"
#include "error.hpp"
#include "tiling.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file io.hpp
 * @brief Triplet CSV, MovieLens ratings and tiling factor files.
 *
 * All CSV uses ',' separators and '\n' line endings. Triplet files look like
 *
 *     # rows=943 cols=1682        (optional; otherwise max index + 1)
 *     row,col,value
 *     0,0,1
 */

namespace tbmc {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

[[noreturn]] inline void parse_fail(const std::string& source, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    return out;
}

}

inline ObservedBinaryMatrix read_triplets_csv(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    bool declared = false;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Triplet> entries;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            // Only "# rows=R cols=C" carries meaning; other comments are skipped.
            std::size_t r = 0;
            std::size_t c = 0;
            bool got_r = false;
            bool got_c = false;
            for (auto tok : detail::split_whitespace(text.substr(1))) {
                if (tok.substr(0, 5) == "rows=") {
                    got_r = detail::parse_number(tok.substr(5), r);
                    if (!got_r) {
                        detail::parse_fail(source, lineno, "bad rows= value");
                    }
                } else if (tok.substr(0, 5) == "cols=") {
                    got_c = detail::parse_number(tok.substr(5), c);
                    if (!got_c) {
                        detail::parse_fail(source, lineno, "bad cols= value");
                    }
                }
            }
            if (got_r != got_c) {
                detail::parse_fail(source, lineno, "dimension comment needs both rows= and cols=");
            }
            if (got_r) {
                declared = true;
                rows = r;
                cols = c;
            }
            continue;
        }
        if (!header_seen) {
            const auto fields = detail::split_on(text, ',');
            if (fields.size() != 3 || fields[0] != "row" || fields[1] != "col" || fields[2] != "value") {
                detail::parse_fail(source, lineno, "expected header row,col,value");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_on(text, ',');
        if (fields.size() != 3) {
            detail::parse_fail(source, lineno, "expected 3 fields");
        }
        std::size_t i = 0;
        std::size_t j = 0;
        long long value = 0;
        if (!detail::parse_number(fields[0], i) || !detail::parse_number(fields[1], j)) {
            detail::parse_fail(source, lineno, "indices must be non-negative integers");
        }
        if (!detail::parse_number(fields[2], value)) {
            detail::parse_fail(source, lineno, "value must be an integer");
        }
        if (value != 0 && value != 1) {
            throw Error(ErrorCode::ValueOutOfDomain,
                        source + ":" + std::to_string(lineno) + ": value " + std::to_string(value) + " is not 0/1");
        }
        entries.push_back(Triplet{i, j, static_cast<Bit>(value)});
    }
    if (!header_seen && !entries.empty()) {
        detail::parse_fail(source, lineno, "missing header");
    }
    if (!declared) {
        for (const auto& e : entries) {
            rows = std::max(rows, e.row + 1);
            cols = std::max(cols, e.col + 1);
        }
    }
    return ObservedBinaryMatrix::from_triplets(rows, cols, std::move(entries));
}

inline ObservedBinaryMatrix read_triplets_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_triplets_csv(in, path);
}

inline void write_triplets_csv(std::ostream& out, const ObservedBinaryMatrix& m) {
    out << "# rows=" << m.rows() << " cols=" << m.cols() << "\n";
    out << "row,col,value\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (const auto& e : m.row(i)) {
            out << i << ',' << e.col << ',' << static_cast<int>(e.bit) << '\n';
        }
    }
}

inline void write_triplets_csv(const std::string& path, const ObservedBinaryMatrix& m) {
    auto out = detail::open_output(path);
    write_triplets_csv(out, m);
}

struct RatingsDataset {
    ObservedBinaryMatrix matrix;
    /// Original ids, indexed by dense 0-based row / column.
    std::vector<std::int64_t> user_ids;
    std::vector<std::int64_t> item_ids;
};

/**
 * Whitespace-separated `user item rating [timestamp]` records. Ratings at or
 * above `threshold` become observed 1s, lower ratings observed 0s. Ids are
 * remapped to 0-based indices in ascending id order, so line order does not
 * matter.
 */
inline RatingsDataset read_movielens(std::istream& in, double threshold = 4.0, const std::string& source = "<stream>") {
    struct Record {
        std::int64_t user;
        std::int64_t item;
        Bit bit;
    };
    std::vector<Record> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_whitespace(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() < 3 || fields.size() > 4) {
            detail::parse_fail(source, lineno, "expected user item rating [timestamp]");
        }
        Record r{};
        double rating = 0.0;
        if (!detail::parse_number(fields[0], r.user) || !detail::parse_number(fields[1], r.item)) {
            detail::parse_fail(source, lineno, "ids must be integers");
        }
        if (!detail::parse_number(fields[2], rating)) {
            detail::parse_fail(source, lineno, "rating must be numeric");
        }
        r.bit = rating >= threshold ? 1 : 0;
        records.push_back(r);
    }

    RatingsDataset out;
    for (const auto& r : records) {
        out.user_ids.push_back(r.user);
        out.item_ids.push_back(r.item);
    }
    auto dedupe = [](std::vector<std::int64_t>& ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    };
    dedupe(out.user_ids);
    dedupe(out.item_ids);
    auto index_of = [](const std::vector<std::int64_t>& ids, std::int64_t id) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<Triplet> entries;
    entries.reserve(records.size());
    for (const auto& r : records) {
        entries.push_back(Triplet{index_of(out.user_ids, r.user), index_of(out.item_ids, r.item), r.bit});
    }
    out.matrix = ObservedBinaryMatrix::from_triplets(out.user_ids.size(), out.item_ids.size(), std::move(entries));
    return out;
}

inline RatingsDataset read_movielens(const std::string& path, double threshold = 4.0) {
    auto in = detail::open_input(path);
    return read_movielens(in, threshold, path);
}

inline void write_id_map(std::ostream& out, const std::vector<std::int64_t>& ids) {
    out << "index,id\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << i << ',' << ids[i] << '\n';
    }
}

// Tiling factors: U.csv is rows x k, V.csv is cols x k, both dense 0/1 with a
// tile_0..tile_{k-1} header. With k = 0 every data line is empty, which keeps
// the row count (and so the matrix shape) recoverable.

inline void write_factor_csv(std::ostream& out, const Tiling& t, bool row_factor) {
    const std::size_t n = row_factor ? t.rows : t.cols;
    for (std::size_t k = 0; k < t.tiles.size(); ++k) {
        out << (k ? "," : "") << "tile_" << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < t.tiles.size(); ++k) {
            const auto& f = row_factor ? t.tiles[k].u : t.tiles[k].v;
            out << (k ? "," : "") << static_cast<int>(f[i]);
        }
        out << '\n';
    }
}

struct FactorFile {
    std::size_t tiles = 0;
    std::size_t lines = 0;
    std::vector<BitVector> columns;  // one per tile, `lines` entries each
};

inline FactorFile read_factor_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) {
        detail::parse_fail(source, 1, "missing header");
    }
    FactorFile f;
    {
        const auto head = detail::trim(line);
        if (!head.empty()) {
            const auto names = detail::split_on(head, ',');
            for (std::size_t c = 0; c < names.size(); ++c) {
                if (names[c] != "tile_" + std::to_string(c)) {
                    detail::parse_fail(source, 1, "expected header tile_0..tile_k");
                }
            }
            f.tiles = names.size();
        }
    }
    f.columns.resize(f.tiles);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (f.tiles == 0) {
            if (!text.empty()) {
                detail::parse_fail(source, lineno, "data in a file without tiles");
            }
            ++f.lines;
            continue;
        }
        if (text.empty()) {
            continue;
        }
        const auto fields = detail::split_on(text, ',');
        if (fields.size() != f.tiles) {
            detail::parse_fail(source, lineno, "expected " + std::to_string(f.tiles) + " fields");
        }
        for (std::size_t c = 0; c < f.tiles; ++c) {
            if (fields[c] == "0") {
                f.columns[c].push_back(0);
            } else if (fields[c] == "1") {
                f.columns[c].push_back(1);
            } else {
                detail::parse_fail(source, lineno, "factor entries must be 0 or 1");
            }
        }
        ++f.lines;
    }
    return f;
}

inline void write_tiling(const Tiling& t, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
    }
    const std::filesystem::path base(dir);
    auto u = detail::open_output((base / "U.csv").string());
    write_factor_csv(u, t, true);
    auto v = detail::open_output((base / "V.csv").string());
    write_factor_csv(v, t, false);
    if (!u || !v) {
        throw Error(ErrorCode::IoError, "write failed under " + dir);
    }
}

inline Tiling read_tiling(const std::string& dir) {
    const std::filesystem::path base(dir);
    const auto upath = (base / "U.csv").string();
    const auto vpath = (base / "V.csv").string();
    auto uin = detail::open_input(upath);
    auto vin = detail::open_input(vpath);
    auto us = read_factor_csv(uin, upath);
    auto vs = read_factor_csv(vin, vpath);
    if (us.tiles != vs.tiles) {
        throw Error(ErrorCode::ParseError, "U.csv and V.csv disagree on the number of tiles");
    }
    Tiling t;
    t.rows = us.lines;
    t.cols = vs.lines;
    for (std::size_t k = 0; k < us.tiles; ++k) {
        t.tiles.push_back(Tile{std::move(us.columns[k]), std::move(vs.columns[k])});
    }
    return t;
}

}

#endif
