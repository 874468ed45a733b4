#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "limitlab/bitstring.hpp"
#include "limitlab/errors.hpp"

namespace limitlab::toyvm {

/// TOYVM-1: a fixed, total, loop-free run-length description machine.
/// Program bit strings decode left to right, first bit most significant:
///
///   0 b          EMIT    append the literal bit b            (2 bits)
///   10 lll ccc   REPEAT  l = lll+1 in 1..8, c = ccc+1 in 1..8;
///                        take B = the last l bits of the output so far
///                        and append B exactly c times         (8 bits)
///   11           HALT    stop                                 (2 bits)
///
/// A program is Valid iff decoding consumes every bit and ends in HALT.
/// Running past the end mid-instruction is Truncated, bits left after HALT
/// are TrailingBits, and a REPEAT asking for more output than exists is a
/// RepeatUnderflow. This machine is deliberately not universal: totality is
/// what makes exhaustive minimal-description search exact.

/// A candidate description program is just its code string.
using DescriptionProgram = BitString;

enum class InvalidReason { Truncated, TrailingBits, RepeatUnderflow };

inline const char* to_string(InvalidReason r) {
    switch (r) {
        case InvalidReason::Truncated: return "truncated";
        case InvalidReason::TrailingBits: return "trailing_bits";
        case InvalidReason::RepeatUnderflow: return "repeat_underflow";
    }
    return "?";
}

/// Outcome of decoding one program: either Valid with the produced output,
/// or Invalid with a diagnostic. Decoding is deterministic and total.
class DecodeOutcome {
public:
    static DecodeOutcome valid(BitString output, std::size_t emits, std::size_t repeats) {
        DecodeOutcome o;
        o.output_ = std::move(output);
        o.emits_ = emits;
        o.repeats_ = repeats;
        return o;
    }
    static DecodeOutcome invalid(InvalidReason r) {
        DecodeOutcome o;
        o.reason_ = r;
        return o;
    }

    bool is_valid() const noexcept { return output_.has_value(); }
    const BitString& output() const { return output_.value(); }
    InvalidReason reason() const { return reason_; }

    /// Instruction census of a valid decode (EMIT / REPEAT counts, HALT excluded).
    std::size_t emit_count() const noexcept { return emits_; }
    std::size_t repeat_count() const noexcept { return repeats_; }

    friend bool operator==(const DecodeOutcome& a, const DecodeOutcome& b) {
        if (a.is_valid() != b.is_valid()) return false;
        return a.is_valid() ? a.output() == b.output() : a.reason_ == b.reason_;
    }

private:
    std::optional<BitString> output_;
    InvalidReason reason_ = InvalidReason::Truncated;
    std::size_t emits_ = 0;
    std::size_t repeats_ = 0;
};

/// Decode one program. Total: every bit string maps to exactly one outcome.
inline DecodeOutcome decode(const DescriptionProgram& program) {
    const std::size_t len = program.size();
    BitString out;
    std::size_t pos = 0;
    std::size_t emits = 0;
    std::size_t repeats = 0;
    for (;;) {
        if (pos >= len) return DecodeOutcome::invalid(InvalidReason::Truncated);
        if (program[pos] == 0) { // EMIT
            if (pos + 2 > len) return DecodeOutcome::invalid(InvalidReason::Truncated);
            out.append(program[pos + 1]);
            pos += 2;
            ++emits;
            continue;
        }
        if (pos + 2 > len) return DecodeOutcome::invalid(InvalidReason::Truncated);
        if (program[pos + 1] == 1) { // HALT
            pos += 2;
            if (pos != len) return DecodeOutcome::invalid(InvalidReason::TrailingBits);
            return DecodeOutcome::valid(std::move(out), emits, repeats);
        }
        // REPEAT
        if (pos + 8 > len) return DecodeOutcome::invalid(InvalidReason::Truncated);
        const std::size_t l = static_cast<std::size_t>(program[pos + 2] << 2 |
                                                       program[pos + 3] << 1 |
                                                       program[pos + 4]) +
                              1;
        const std::size_t c = static_cast<std::size_t>(program[pos + 5] << 2 |
                                                       program[pos + 6] << 1 |
                                                       program[pos + 7]) +
                              1;
        if (out.size() < l) return DecodeOutcome::invalid(InvalidReason::RepeatUnderflow);
        // Copy a snapshot of the last l bits, appended c times.
        std::vector<std::uint8_t> block(out.raw().end() - static_cast<std::ptrdiff_t>(l),
                                        out.raw().end());
        for (std::size_t k = 0; k < c; ++k)
            for (auto b : block) out.append(b);
        pos += 8;
        ++repeats;
    }
}

/// Default cap on exhaustive program enumeration (2^(L+1) programs).
inline constexpr std::size_t kDefaultMaxProgramLen = 26;

/// Cursor over every program of length 2..max_len in rank order, paired with
/// its decode outcome.
class ProgramCursor {
public:
    explicit ProgramCursor(std::size_t max_len, std::size_t cap = kDefaultMaxProgramLen)
        : max_len_(max_len) {
        if (max_len > cap)
            throw CapExceeded("program length " + std::to_string(max_len) + " exceeds cap " +
                              std::to_string(cap));
        if (max_len_ >= 2) current_ = BitString::zeros(2);
    }

    std::optional<std::pair<DescriptionProgram, DecodeOutcome>> next() {
        if (!current_) return std::nullopt;
        auto item = std::make_pair(*current_, decode(*current_));
        if (!next_in_level(*current_)) {
            if (current_->size() >= max_len_) {
                current_.reset();
            } else {
                current_ = BitString::zeros(current_->size() + 1);
            }
        }
        return item;
    }

private:
    std::size_t max_len_;
    std::optional<BitString> current_;
};

/// Run `fn(program, outcome)` for every program of length 2..max_len in rank
/// order. The partitioning is an implementation detail; results do not depend
/// on it.
template <class Fn>
void for_each_program(std::size_t max_len, Fn&& fn,
                      std::size_t cap = kDefaultMaxProgramLen) {
    ProgramCursor cursor(max_len, cap);
    while (auto item = cursor.next()) fn(item->first, item->second);
}

/// Materialized enumeration; intended for small max_len.
inline std::vector<std::pair<DescriptionProgram, DecodeOutcome>> enumerate_programs(
    std::size_t max_len, std::size_t cap = kDefaultMaxProgramLen) {
    std::vector<std::pair<DescriptionProgram, DecodeOutcome>> out;
    for_each_program(
        max_len, [&](const DescriptionProgram& p, const DecodeOutcome& o) { out.emplace_back(p, o); },
        cap);
    return out;
}

/// Minimal valid description length per output, for programs of length up to
/// max_prog_len. An entry (s -> k) exists iff some valid program of length
/// <= max_prog_len outputs s, with k the minimum such length.
struct ComplexityTable {
    std::size_t max_prog_len = 0;
    std::map<BitString, std::size_t, RankLess> entries;

    std::optional<std::size_t> lookup(const BitString& s) const {
        auto it = entries.find(s);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }
};

/// Exhaust every program of length <= max_prog_len and record minimal
/// description lengths. Programs enumerate shortest first, so the first
/// program producing an output fixes its minimum.
inline ComplexityTable min_description_table(std::size_t max_prog_len,
                                             std::size_t cap = kDefaultMaxProgramLen) {
    ComplexityTable table;
    table.max_prog_len = max_prog_len;
    for_each_program(
        max_prog_len,
        [&](const DescriptionProgram& p, const DecodeOutcome& o) {
            if (o.is_valid()) table.entries.emplace(o.output(), p.size());
        },
        cap);
    return table;
}

/// ndjson form: a header line {"max_prog_len": L} followed by one
/// {"s": "<bits>", "k": <int>} line per entry in rank order.
inline void write_ndjson(const ComplexityTable& table, std::ostream& os) {
    os << "{\"max_prog_len\": " << table.max_prog_len << "}\n";
    for (const auto& [s, k] : table.entries)
        os << "{\"s\": \"" << s.text() << "\", \"k\": " << k << "}\n";
}

} // namespace limitlab::toyvm
