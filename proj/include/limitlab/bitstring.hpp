#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "limitlab/errors.hpp"

namespace limitlab {

/// A finite sequence of binary digits. The empty string is a valid value;
/// equality is positional. This is the carrier type for everything else in
/// the library: reals are represented by their finite prefixes, programs
/// and problems by their encodings.
class BitString {
public:
    BitString() = default;

    explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto b : bits_) {
            if (b > 1) throw std::invalid_argument("BitString digits must be 0 or 1");
        }
    }

    /// Parse from ASCII '0'/'1' text (the stream text form).
    static BitString from_text(std::string_view text) {
        BitString s;
        s.bits_.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c != '0' && c != '1') throw ParseError(i, "'0' or '1'");
            s.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return s;
    }

    static BitString zeros(std::size_t n) {
        BitString s;
        s.bits_.assign(n, 0);
        return s;
    }

    /// The `width`-bit big-endian expansion of `value`.
    static BitString from_value(std::uint64_t value, std::size_t width) {
        if (width < 64 && value >> width)
            throw std::invalid_argument("value does not fit in width");
        BitString s;
        s.bits_.resize(width);
        for (std::size_t i = 0; i < width; ++i)
            s.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1u);
        return s;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    /// Checked access.
    int bit(std::size_t i) const {
        if (i >= bits_.size())
            throw IndexOutOfRange("bit index " + std::to_string(i) + " out of range for length " +
                                  std::to_string(bits_.size()));
        return bits_[i];
    }

    int operator[](std::size_t i) const noexcept { return bits_[i]; }

    void append(int b) { bits_.push_back(static_cast<std::uint8_t>(b ? 1 : 0)); }

    void pop_back() {
        if (bits_.empty()) throw EmptyTruncate();
        bits_.pop_back();
    }

    void toggle(std::size_t i) {
        if (i >= bits_.size())
            throw IndexOutOfRange("flip index " + std::to_string(i) + " out of range for length " +
                                  std::to_string(bits_.size()));
        bits_[i] ^= 1u;
    }

    std::string text() const {
        std::string out;
        out.reserve(bits_.size());
        for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
        return out;
    }

    /// Value of the string read as a big-endian binary numeral.
    /// Defined for lengths up to 64 bits; longer strings exceed machine range.
    std::uint64_t value() const {
        if (bits_.size() > 64)
            throw std::overflow_error("binary numeral wider than 64 bits");
        std::uint64_t v = 0;
        for (auto b : bits_) v = (v << 1) | b;
        return v;
    }

    const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }

    friend bool operator==(const BitString&, const BitString&) = default;
    auto operator<=>(const BitString&) const = default; // lexicographic, prefix first

private:
    std::vector<std::uint8_t> bits_;
};

struct BitStringHash {
    std::size_t operator()(const BitString& s) const noexcept {
        // FNV-1a over the digits.
        std::size_t h = 1469598103934665603ull;
        for (auto b : s.raw()) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Global enumeration order: shorter strings first, ties broken
/// lexicographically (0 < 1). This is the order the level-by-level
/// generator emits and the order ranks are computed in.
inline bool rank_less(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

struct RankLess {
    bool operator()(const BitString& a, const BitString& b) const { return rank_less(a, b); }
};

// ---------------------------------------------------------------------------
// Level-by-level enumeration and the square-matrix construction.
// ---------------------------------------------------------------------------

/// All 2^n strings of length n, in ascending lexicographic order.
struct LevelMatrix {
    std::size_t n = 0;
    std::vector<BitString> rows;
};

/// The first n rows of the level-n enumeration: n strings of length n,
/// in the same order as LevelMatrix.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<BitString> rows;
};

/// Default cap on the level length n: 2^n rows are materialized.
inline constexpr std::size_t kDefaultMaxLevel = 24;

/// Default cap on the square-matrix side (n rows of n bits each).
inline constexpr std::size_t kDefaultMaxSquareSide = 4096;

/// Lexicographic successor within a level: treat the string as a binary
/// odometer. Returns false (leaving all ones) when the level is exhausted.
inline bool next_in_level(BitString& s) {
    for (std::size_t i = s.size(); i-- > 0;) {
        if (s[i] == 0) {
            s.toggle(i);
            return true;
        }
        s.toggle(i);
    }
    return false;
}

/// Successor in the global rank order: odometer step, rolling over from the
/// all-ones string of length n to the all-zeros string of length n+1.
inline void next_in_rank(BitString& s) {
    if (!next_in_level(s)) s = BitString::zeros(s.size() + 1);
}

/// The row at `index` in the level-n enumeration, computed directly from the
/// index (the n-bit big-endian expansion). Needs no materialization, so it
/// stays usable for levels far above the enumeration cap.
inline BitString level_row(std::size_t n, std::uint64_t index) {
    if (n > 62) throw CapExceeded("level length " + std::to_string(n) + " exceeds index range");
    if (index >= (std::uint64_t{1} << n))
        throw IndexOutOfRange("row index out of range for level " + std::to_string(n));
    return BitString::from_value(index, n);
}

/// Membership of s in the level-n enumeration, via the index bijection.
inline bool level_contains(std::size_t n, const BitString& s) {
    if (s.size() != n) return false;
    if (n == 0) return s.empty();
    if (n > 62) throw CapExceeded("level length " + std::to_string(n) + " exceeds index range");
    return level_row(n, s.value()) == s;
}

/// All 2^n strings of length n in ascending lexicographic order.
/// Throws CapExceeded for n above `cap` (default 24): the row count doubles
/// per level and is materialized here.
inline LevelMatrix enumerate_level(std::size_t n, std::size_t cap = kDefaultMaxLevel) {
    if (n > cap)
        throw CapExceeded("level length " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
    LevelMatrix m;
    m.n = n;
    m.rows.reserve(std::size_t{1} << n);
    BitString row = BitString::zeros(n);
    do {
        m.rows.push_back(row);
    } while (next_in_level(row));
    return m;
}

/// The square matrix of side n: the first n rows of the level-n enumeration.
inline SquareMatrix square_matrix(std::size_t n, std::size_t cap = kDefaultMaxSquareSide) {
    if (n < 1) throw std::invalid_argument("square matrix side must be >= 1");
    if (n > cap)
        throw CapExceeded("square side " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
    SquareMatrix m;
    m.n = n;
    m.rows.reserve(n);
    for (std::uint64_t j = 0; j < n; ++j) m.rows.push_back(level_row(n, j));
    return m;
}

/// The anti-diagonal string d with d[i] = 1 - rows[i][i]: by construction d
/// differs from every row of the square matrix in at least one position.
inline BitString antidiagonal_flip(const SquareMatrix& m) {
    BitString d;
    for (std::size_t i = 0; i < m.rows.size(); ++i) d.append(1 - m.rows[i][i]);
    return d;
}

// ---------------------------------------------------------------------------
// Canonical index in the global enumeration order.
// ---------------------------------------------------------------------------

/// rank_of(s) = (2^len(s) - 1) + value(s): the position of s in the
/// length-then-lexicographic order starting from the empty string at 0.
/// Defined for lengths up to 63 bits.
inline std::uint64_t rank_of(const BitString& s) {
    if (s.size() > 63) throw std::overflow_error("rank wider than 64 bits");
    const std::uint64_t base = (std::uint64_t{1} << s.size()) - 1;
    return base + s.value();
}

/// Inverse of rank_of: the k-th string in the global order.
inline BitString string_at(std::uint64_t k) {
    std::size_t len = 0;
    std::uint64_t first = 0; // rank of the all-zeros string of length len
    while (len < 64 && k - first >= (std::uint64_t{1} << len)) {
        first += std::uint64_t{1} << len;
        ++len;
    }
    return BitString::from_value(k - first, len);
}

// ---------------------------------------------------------------------------
// Universal single-step edits.
// ---------------------------------------------------------------------------

struct FlipBit {
    std::size_t index;
};
struct ExtendBit {
    int bit;
};
struct Truncate {};

using EditAction = std::variant<FlipBit, ExtendBit, Truncate>;

/// Apply one editing step. Flip toggles a position, extend appends a bit,
/// truncate drops the last bit. These three actions reach every finite
/// string from every other.
inline BitString edit_bit(const BitString& s, const EditAction& action) {
    BitString out = s;
    if (const auto* f = std::get_if<FlipBit>(&action)) {
        out.toggle(f->index);
    } else if (const auto* e = std::get_if<ExtendBit>(&action)) {
        out.append(e->bit);
    } else {
        out.pop_back();
    }
    return out;
}

} // namespace limitlab
