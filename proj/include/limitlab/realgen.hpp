#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "limitlab/bitstring.hpp"
#include "limitlab/complexity.hpp"
#include "limitlab/errors.hpp"

namespace limitlab::realgen {

// ---------------------------------------------------------------------------
// Bit sources.
// ---------------------------------------------------------------------------

/// One bit per request. Implementations either never run dry or throw
/// SourceExhausted.
class BitSource {
public:
    virtual ~BitSource() = default;
    virtual int next_bit() = 0; // 0 or 1
};

/// Deterministic source over the SplitMix64 recurrence; equal seeds yield
/// equal bit sequences. Each output consumes one state update and serves the
/// top bit.
class SeededSource final : public BitSource {
public:
    explicit SeededSource(std::uint64_t seed) : state_(seed) {}

    int next_bit() override { return static_cast<int>(next_u64() >> 63); }

private:
    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

class ConstantSource final : public BitSource {
public:
    explicit ConstantSource(int bit) : bit_(bit) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    }

    int next_bit() override { return bit_; }

private:
    int bit_;
};

/// 0, 1, 0, 1, ...
class AlternatingSource final : public BitSource {
public:
    int next_bit() override {
        const int bit = next_;
        next_ = 1 - next_;
        return bit;
    }

private:
    int next_ = 0;
};

/// Nondeterministic bits from the platform entropy source, served MSB-first
/// out of 32-bit draws.
class OsEntropySource final : public BitSource {
public:
    int next_bit() override {
        if (remaining_ == 0) {
            buffer_ = device_();
            remaining_ = 32;
        }
        --remaining_;
        return static_cast<int>((buffer_ >> remaining_) & 1u);
    }

private:
    std::random_device device_;
    std::uint32_t buffer_ = 0;
    unsigned remaining_ = 0;
};

/// A finite, explicit bit sequence; throws SourceExhausted when it runs dry.
class FixedSource final : public BitSource {
public:
    explicit FixedSource(std::vector<int> bits) : bits_(std::move(bits)) {}
    explicit FixedSource(const BitString& bits) {
        bits_.reserve(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits_.push_back(bits[i]);
    }

    int next_bit() override {
        if (pos_ >= bits_.size()) throw SourceExhausted();
        return bits_[pos_++];
    }

private:
    std::vector<int> bits_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Single-path real generation.
// ---------------------------------------------------------------------------

/// Cursor over one source-driven path through the binary tree: emits prefixes
/// of lengths 1..max_len, each extending the previous by one source bit.
class RealStream {
public:
    RealStream(BitSource& source, std::size_t max_len)
        : source_(&source), max_len_(max_len) {
        if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    }

    std::optional<BitString> next() {
        if (prefix_.size() >= max_len_) return std::nullopt;
        prefix_.append(source_->next_bit());
        return prefix_;
    }

private:
    BitSource* source_;
    std::size_t max_len_;
    BitString prefix_;
};

inline std::vector<BitString> random_real_prefixes(BitSource& source, std::size_t max_len) {
    RealStream stream(source, max_len);
    std::vector<BitString> out;
    out.reserve(max_len);
    while (auto p = stream.next()) out.push_back(*p);
    return out;
}

// ---------------------------------------------------------------------------
// Well-defined-target search.
// ---------------------------------------------------------------------------

/// Walk the global rank order from "" and compare each string against the
/// target; the index of the hit is returned and always equals rank_of(target).
/// Cost is linear in that rank.
inline std::uint64_t find_target(const BitString& target) {
    BitString candidate; // rank 0
    std::uint64_t index = 0;
    while (candidate != target) {
        next_in_rank(candidate);
        ++index;
    }
    return index;
}

// ---------------------------------------------------------------------------
// Filtered (depth-first) stream.
// ---------------------------------------------------------------------------

enum class StreamEvent { Emit, Reject, Backtrack };

inline const char* to_string(StreamEvent e) {
    switch (e) {
        case StreamEvent::Emit: return "emit";
        case StreamEvent::Reject: return "reject";
        case StreamEvent::Backtrack: return "backtrack";
    }
    return "?";
}

/// One step of a filtered stream. For Emit and Reject, `prefix` is the
/// candidate; for Backtrack it is the node backtracked to (one bit shorter
/// than the abandoned one).
struct StreamItem {
    BitString prefix;
    StreamEvent event = StreamEvent::Emit;

    bool operator==(const StreamItem&) const = default;
};

/// ndjson form: {"len": <int>, "prefix": "<bits>", "event": "<event>"}.
inline void write_ndjson(const StreamItem& item, std::ostream& os) {
    os << "{\"len\": " << item.prefix.size() << ", \"prefix\": \"" << item.prefix.text()
       << "\", \"event\": \"" << to_string(item.event) << "\"}\n";
}

/// Depth-first single-path generator with an acceptance predicate. Candidates
/// of length <= exempt_len are accepted without consulting the predicate.
/// On rejection the sibling bit is tried next; when both children of a node
/// fail, the stream backtracks one level per step (each pop reported as a
/// Backtrack item) until an untried sibling is found. Backtracking past the
/// root throws DeadEnd. The stream finishes after emitting a prefix of
/// length max_len.
template <class Accept>
class FilteredStream {
public:
    FilteredStream(BitSource& source, std::size_t exempt_len, std::size_t max_len,
                   Accept accept)
        : source_(&source), exempt_len_(exempt_len), max_len_(max_len),
          accept_(std::move(accept)) {
        if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    }

    std::optional<StreamItem> next() {
        if (finished_) return std::nullopt;

        if (must_backtrack_) {
            if (frames_.empty())
                throw DeadEnd("no admissible path up to length " +
                              std::to_string(max_len_));
            const Frame popped = frames_.back();
            frames_.pop_back();
            prefix_.pop_back();
            if (popped.was_sibling) {
                // Both bits at that depth are spent; keep unwinding.
            } else {
                pending_ = Trial{popped.first_bit, true};
                has_pending_ = true;
                must_backtrack_ = false;
            }
            return StreamItem{prefix_, StreamEvent::Backtrack};
        }

        if (!has_pending_) {
            pending_ = Trial{source_->next_bit(), false};
            has_pending_ = true;
        }
        const int bit = pending_.use_sibling ? 1 - pending_.first_bit
                                             : pending_.first_bit;
        BitString candidate = prefix_;
        candidate.append(bit);

        if (candidate.size() <= exempt_len_ || accept_(candidate)) {
            frames_.push_back(Frame{pending_.first_bit, pending_.use_sibling});
            prefix_ = std::move(candidate);
            has_pending_ = false;
            if (prefix_.size() >= max_len_) finished_ = true;
            return StreamItem{prefix_, StreamEvent::Emit};
        }

        if (!pending_.use_sibling) {
            pending_.use_sibling = true; // sibling is tried on the next step
        } else {
            has_pending_ = false;
            must_backtrack_ = true;
        }
        return StreamItem{std::move(candidate), StreamEvent::Reject};
    }

private:
    struct Trial {
        int first_bit;
        bool use_sibling;
    };
    struct Frame {
        int first_bit;        // the bit first tried at this depth
        bool was_sibling;     // the accepted bit was already the sibling
    };

    BitSource* source_;
    std::size_t exempt_len_;
    std::size_t max_len_;
    Accept accept_;
    BitString prefix_;
    std::vector<Frame> frames_;
    Trial pending_{0, false};
    bool has_pending_ = false;
    bool must_backtrack_ = false;
    bool finished_ = false;
};

/// Acceptance by the noncompressibility oracle.
struct NoncompressibleAccept {
    complexity::CompressibilityParams params;
    std::size_t prog_cap = toyvm::kDefaultMaxProgramLen;

    bool operator()(const BitString& s) const {
        return complexity::is_m_noncompressible(s, params, prog_cap);
    }
};

/// The AS+L+E stream: every emitted prefix longer than m + c is
/// m-non-compressible; prefixes of length <= m + c are exempt.
class NoncompressibleStream {
public:
    NoncompressibleStream(BitSource& source, complexity::CompressibilityParams params,
                          std::size_t max_len,
                          std::size_t prog_cap = toyvm::kDefaultMaxProgramLen)
        : inner_(source, params.machine_bound(), max_len,
                 NoncompressibleAccept{params, prog_cap}) {
        if (params.machine_bound() > prog_cap)
            throw CapExceeded("program bound " + std::to_string(params.machine_bound()) +
                              " exceeds cap " + std::to_string(prog_cap));
    }

    std::optional<StreamItem> next() { return inner_.next(); }

private:
    FilteredStream<NoncompressibleAccept> inner_;
};

} // namespace limitlab::realgen
