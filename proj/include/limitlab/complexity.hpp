#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "limitlab/bitstring.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/toyvm.hpp"

namespace limitlab::complexity {

/// Parameters of the m-compressibility predicate: a string counts as
/// m-compressible when some valid description program of length at most
/// m + c produces it. c is the machine overhead allowance and defaults to 0;
/// it is surfaced as a parameter rather than fixed.
struct CompressibilityParams {
    std::size_t m = 0;
    std::size_t c = 0;

    std::size_t machine_bound() const noexcept { return m + c; }
};

/// True iff no valid description program of length <= m + c outputs `a`.
/// Decided by exhausting the program space up to the bound, shortest first.
inline bool is_m_noncompressible(const BitString& a, CompressibilityParams params,
                                 std::size_t cap = toyvm::kDefaultMaxProgramLen) {
    const std::size_t bound = params.machine_bound();
    if (bound > cap)
        throw CapExceeded("program bound " + std::to_string(bound) + " exceeds cap " +
                          std::to_string(cap));
    if (bound < 2) return true; // no valid program is shorter than the bare HALT
    toyvm::ProgramCursor cursor(bound, cap);
    while (auto item = cursor.next()) {
        if (item->second.is_valid() && item->second.output() == a) return false;
    }
    return true;
}

/// The rows of the level-n enumeration that are m-non-compressible,
/// in enumeration order.
inline std::vector<BitString> filter_noncompressible(
    std::size_t n, CompressibilityParams params,
    std::size_t level_cap = kDefaultMaxLevel,
    std::size_t prog_cap = toyvm::kDefaultMaxProgramLen) {
    if (n > level_cap)
        throw CapExceeded("level length " + std::to_string(n) + " exceeds cap " +
                          std::to_string(level_cap));
    if (params.machine_bound() > prog_cap)
        throw CapExceeded("program bound " + std::to_string(params.machine_bound()) +
                          " exceeds cap " + std::to_string(prog_cap));
    std::vector<BitString> kept;
    BitString row = BitString::zeros(n);
    do {
        if (is_m_noncompressible(row, params, prog_cap)) kept.push_back(row);
    } while (next_in_level(row));
    return kept;
}

/// The counting bound 2^n - 2 - sum_{i=1..m} 2^i = 2^n - 2^{m+1},
/// returned exactly as the formula yields it (possibly negative).
inline std::int64_t theorem4_bound(std::size_t n, std::size_t m) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (n > 62 || m > 61) throw std::overflow_error("bound exceeds 64-bit range");
    return static_cast<std::int64_t>(std::int64_t{1} << n) -
           (std::int64_t{2} << m);
}

/// How many strings of length n have minimal description length exactly k,
/// for each k in 2..max_prog_len, plus the count with no description at all
/// within the bound. Buckets partition the 2^n strings of length n.
struct CompressionCensus {
    std::size_t n = 0;
    std::size_t max_prog_len = 0;
    std::vector<std::uint64_t> count_by_len; // index k-2 -> count for k
    std::uint64_t none = 0;

    std::uint64_t count_for(std::size_t k) const { return count_by_len.at(k - 2); }
};

inline CompressionCensus compression_census(std::size_t n, std::size_t max_prog_len,
                                            std::size_t level_cap = kDefaultMaxLevel,
                                            std::size_t prog_cap = toyvm::kDefaultMaxProgramLen) {
    if (n > level_cap)
        throw CapExceeded("level length " + std::to_string(n) + " exceeds cap " +
                          std::to_string(level_cap));
    if (max_prog_len < 2)
        throw std::invalid_argument("max_prog_len must be >= 2");
    const auto table = toyvm::min_description_table(max_prog_len, prog_cap);
    CompressionCensus census;
    census.n = n;
    census.max_prog_len = max_prog_len;
    census.count_by_len.assign(max_prog_len - 1, 0);
    BitString row = BitString::zeros(n);
    do {
        if (auto k = table.lookup(row)) {
            ++census.count_by_len[*k - 2];
        } else {
            ++census.none;
        }
    } while (next_in_level(row));
    return census;
}

/// ndjson form: one {"k": <int>, "count": <int>} line per bucket, then a
/// final {"none": <int>} line.
inline void write_ndjson(const CompressionCensus& census, std::ostream& os) {
    for (std::size_t k = 2; k <= census.max_prog_len; ++k)
        os << "{\"k\": " << k << ", \"count\": " << census.count_by_len[k - 2] << "}\n";
    os << "{\"none\": " << census.none << "}\n";
}

} // namespace limitlab::complexity
