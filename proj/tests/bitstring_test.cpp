#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "limitlab/bitstring.hpp"

using limitlab::BitString;

namespace {

BitString bs(const char* text) { return BitString::from_text(text); }

std::vector<std::string> texts(const std::vector<BitString>& rows) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.text());
    return out;
}

} // namespace

TEST_CASE("enumerate_level produces all strings of a level in lexicographic order") {
    CHECK(texts(limitlab::enumerate_level(1).rows) == std::vector<std::string>{"0", "1"});
    CHECK(texts(limitlab::enumerate_level(0).rows) == std::vector<std::string>{""});
    CHECK(texts(limitlab::enumerate_level(2).rows) ==
          std::vector<std::string>{"00", "01", "10", "11"});
}

TEST_CASE("level completeness for all small n") {
    for (std::size_t n = 0; n <= 12; ++n) {
        const auto level = limitlab::enumerate_level(n);
        REQUIRE(level.rows.size() == (std::size_t{1} << n));
        std::set<BitString> distinct;
        for (std::size_t i = 0; i < level.rows.size(); ++i) {
            REQUIRE(level.rows[i].size() == n);
            if (i > 0) REQUIRE(level.rows[i - 1] < level.rows[i]);
            distinct.insert(level.rows[i]);
        }
        REQUIRE(distinct.size() == level.rows.size());
    }
}

TEST_CASE("enumerate_level rejects levels above the cap") {
    CHECK_THROWS_AS(limitlab::enumerate_level(99), limitlab::CapExceeded);
    CHECK_THROWS_AS(limitlab::enumerate_level(11, 10), limitlab::CapExceeded);
    CHECK_NOTHROW(limitlab::enumerate_level(10, 10));
}

TEST_CASE("rank examples") {
    CHECK(limitlab::rank_of(bs("")) == 0);
    CHECK(limitlab::string_at(6) == bs("11"));
    CHECK(limitlab::rank_of(bs("010")) == 9);
    // order: eps, 0, 1, 00, 01, 10, 11
    const char* expected[] = {"", "0", "1", "00", "01", "10", "11"};
    for (std::uint64_t k = 0; k < 7; ++k) CHECK(limitlab::string_at(k).text() == expected[k]);
}

TEST_CASE("rank_of and string_at are mutually inverse") {
    for (std::uint64_t k = 0; k < 120000; ++k) {
        REQUIRE(limitlab::rank_of(limitlab::string_at(k)) == k);
    }
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t len = rng() % 40;
        BitString s;
        for (std::size_t i = 0; i < len; ++i) s.append(static_cast<int>(rng() & 1));
        REQUIRE(limitlab::string_at(limitlab::rank_of(s)) == s);
    }
}

TEST_CASE("next_in_rank walks the same order as string_at") {
    BitString s;
    for (std::uint64_t k = 0; k < 5000; ++k) {
        REQUIRE(s == limitlab::string_at(k));
        limitlab::next_in_rank(s);
    }
}

TEST_CASE("square matrix takes the first n rows of the level") {
    CHECK(texts(limitlab::square_matrix(2).rows) == std::vector<std::string>{"00", "01"});
    CHECK(texts(limitlab::square_matrix(3).rows) ==
          std::vector<std::string>{"000", "001", "010"});
    CHECK(texts(limitlab::square_matrix(1).rows) == std::vector<std::string>{"0"});
    CHECK_THROWS_AS(limitlab::square_matrix(0), std::invalid_argument);
    CHECK_THROWS_AS(limitlab::square_matrix(10, 9), limitlab::CapExceeded);
}

TEST_CASE("square rows agree with the materialized level enumeration") {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto sq = limitlab::square_matrix(n);
        const auto level = limitlab::enumerate_level(n);
        REQUIRE(sq.rows.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(sq.rows[i] == level.rows[i]);
            REQUIRE(limitlab::level_row(n, i) == level.rows[i]);
        }
    }
}

TEST_CASE("antidiagonal flip examples") {
    CHECK(limitlab::antidiagonal_flip(limitlab::square_matrix(2)) == bs("10"));
    CHECK(limitlab::antidiagonal_flip(limitlab::square_matrix(1)) == bs("1"));
    // diagonal of 000/001/010 is 000
    CHECK(limitlab::antidiagonal_flip(limitlab::square_matrix(3)) == bs("111"));
}

TEST_CASE("the antidiagonal string is omitted from the square but present in the level") {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto sq = limitlab::square_matrix(n);
        const auto d = limitlab::antidiagonal_flip(sq);
        CHECK(std::find(sq.rows.begin(), sq.rows.end(), d) == sq.rows.end());
        const auto level = limitlab::enumerate_level(n);
        CHECK(std::find(level.rows.begin(), level.rows.end(), d) != level.rows.end());
        CHECK(limitlab::level_contains(n, d));
    }
}

TEST_CASE("level_contains matches linear search") {
    for (std::size_t n = 0; n <= 10; ++n) {
        const auto level = limitlab::enumerate_level(n);
        for (const auto& row : level.rows) REQUIRE(limitlab::level_contains(n, row));
    }
    CHECK_FALSE(limitlab::level_contains(3, bs("01")));
    CHECK_FALSE(limitlab::level_contains(0, bs("0")));
}

TEST_CASE("edit actions") {
    using limitlab::edit_bit;
    CHECK(edit_bit(bs("010"), limitlab::FlipBit{0}) == bs("110"));
    CHECK(edit_bit(bs("01"), limitlab::ExtendBit{1}) == bs("011"));
    CHECK(edit_bit(bs("0"), limitlab::Truncate{}) == bs(""));
    CHECK_THROWS_AS(edit_bit(bs("01"), limitlab::FlipBit{2}), limitlab::IndexOutOfRange);
    CHECK_THROWS_AS(edit_bit(bs(""), limitlab::Truncate{}), limitlab::EmptyTruncate);
}

TEST_CASE("every string of length <= 10 is reachable from the empty string by edits") {
    for (std::size_t n = 0; n <= 10; ++n) {
        for (const auto& target : limitlab::enumerate_level(n).rows) {
            BitString s;
            for (std::size_t i = 0; i < target.size(); ++i)
                s = limitlab::edit_bit(s, limitlab::ExtendBit{target[i]});
            REQUIRE(s == target);
            // and back down to the empty string
            while (!s.empty()) s = limitlab::edit_bit(s, limitlab::Truncate{});
            REQUIRE(s == BitString{});
        }
    }
}

TEST_CASE("text round trip and digit validation") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        BitString s;
        const std::size_t len = rng() % 30;
        for (std::size_t i = 0; i < len; ++i) s.append(static_cast<int>(rng() & 1));
        REQUIRE(BitString::from_text(s.text()) == s);
    }
    CHECK_THROWS_AS(BitString::from_text("01x"), limitlab::ParseError);
}
