#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "limitlab/errors.hpp"

namespace limitlab::ak {

// ---------------------------------------------------------------------------
// Three truth values. The numeric encoding makes the strong Kleene tables
// min/max: False < Paradox < True.
// ---------------------------------------------------------------------------

enum class TruthValue3 { False = 0, Paradox = 1, True = 2 };

inline const char* to_string(TruthValue3 v) {
    switch (v) {
        case TruthValue3::False: return "false";
        case TruthValue3::Paradox: return "paradox";
        case TruthValue3::True: return "true";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Sentences.
// ---------------------------------------------------------------------------

enum class Kind { Atom, ConstTrue, ConstFalse, Liar, Not, And, Or, Implies };

struct Sentence;
using SentencePtr = std::shared_ptr<const Sentence>;

/// Immutable AST node. Unary nodes use `left`; leaves use neither.
struct Sentence {
    Kind kind;
    std::string name; // Kind::Atom only
    SentencePtr left;
    SentencePtr right;
};

inline bool operator==(const Sentence& a, const Sentence& b) {
    if (a.kind != b.kind || a.name != b.name) return false;
    const auto same = [](const SentencePtr& x, const SentencePtr& y) {
        if (!x || !y) return !x && !y;
        return *x == *y;
    };
    return same(a.left, b.left) && same(a.right, b.right);
}

inline SentencePtr atom(std::string name) {
    return std::make_shared<Sentence>(Sentence{Kind::Atom, std::move(name), {}, {}});
}
inline SentencePtr constant(bool value) {
    return std::make_shared<Sentence>(
        Sentence{value ? Kind::ConstTrue : Kind::ConstFalse, "", {}, {}});
}
inline SentencePtr liar() {
    return std::make_shared<Sentence>(Sentence{Kind::Liar, "", {}, {}});
}
inline SentencePtr negation(SentencePtr s) {
    return std::make_shared<Sentence>(Sentence{Kind::Not, "", std::move(s), {}});
}
inline SentencePtr conjunction(SentencePtr a, SentencePtr b) {
    return std::make_shared<Sentence>(
        Sentence{Kind::And, "", std::move(a), std::move(b)});
}
inline SentencePtr disjunction(SentencePtr a, SentencePtr b) {
    return std::make_shared<Sentence>(
        Sentence{Kind::Or, "", std::move(a), std::move(b)});
}
inline SentencePtr implication(SentencePtr a, SentencePtr b) {
    return std::make_shared<Sentence>(
        Sentence{Kind::Implies, "", std::move(a), std::move(b)});
}

inline bool has_liar(const Sentence& s) {
    if (s.kind == Kind::Liar) return true;
    if (s.left && has_liar(*s.left)) return true;
    return s.right && has_liar(*s.right);
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

/// Classical values for the classical atoms; the Liar carries none.
using Assignment = std::map<std::string, bool>;

/// Strong Kleene tables over False < Paradox < True: And is min, Or is max,
/// Not mirrors, Implies(x, y) is Or(Not(x), y). The Liar evaluates to
/// Paradox, constants and assigned atoms to their classical values.
inline TruthValue3 evaluate_kleene(const Sentence& s, const Assignment& a) {
    switch (s.kind) {
        case Kind::Atom: {
            const auto it = a.find(s.name);
            if (it == a.end()) throw UnboundAtom(s.name);
            return it->second ? TruthValue3::True : TruthValue3::False;
        }
        case Kind::ConstTrue: return TruthValue3::True;
        case Kind::ConstFalse: return TruthValue3::False;
        case Kind::Liar: return TruthValue3::Paradox;
        case Kind::Not:
            return static_cast<TruthValue3>(
                2 - static_cast<int>(evaluate_kleene(*s.left, a)));
        case Kind::And:
            return std::min(evaluate_kleene(*s.left, a), evaluate_kleene(*s.right, a));
        case Kind::Or:
            return std::max(evaluate_kleene(*s.left, a), evaluate_kleene(*s.right, a));
        case Kind::Implies: {
            const auto x = static_cast<int>(evaluate_kleene(*s.left, a));
            const auto y = evaluate_kleene(*s.right, a);
            return std::max(static_cast<TruthValue3>(2 - x), y);
        }
    }
    throw std::logic_error("unhandled sentence kind");
}

/// The paradox-collapsing valuation: conjoining with ap leaves classical
/// values alone and turns Paradox into False, so the result is two-valued.
inline bool evaluate_ak(const Sentence& s, const Assignment& a) {
    return evaluate_kleene(s, a) == TruthValue3::True;
}

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   s := s "->" s | s "|" s | s "&" s | "!" s | "(" s ")"
//      | "TRUE" | "FALSE" | "LIAR" | atom
//
// Precedence low to high: ->, |, &, !. "->" associates right, "|" and "&"
// left. Atoms match [a-z][a-z0-9_]*.
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    SentencePtr parse() {
        auto s = parse_implies();
        skip_space();
        if (pos_ != text_.size()) throw ParseError(pos_, "end of input");
        return s;
    }

private:
    SentencePtr parse_implies() {
        auto left = parse_or();
        skip_space();
        if (match("->")) return implication(std::move(left), parse_implies());
        return left;
    }

    SentencePtr parse_or() {
        auto left = parse_and();
        for (;;) {
            skip_space();
            // "|" but not the first char of a (hypothetical) longer operator;
            // nothing else starts with '|', so a plain match is enough.
            if (!match("|")) return left;
            left = disjunction(std::move(left), parse_and());
        }
    }

    SentencePtr parse_and() {
        auto left = parse_unary();
        for (;;) {
            skip_space();
            if (!match("&")) return left;
            left = conjunction(std::move(left), parse_unary());
        }
    }

    SentencePtr parse_unary() {
        skip_space();
        if (match("!")) return negation(parse_unary());
        return parse_primary();
    }

    SentencePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(pos_, "a sentence");
        if (match("(")) {
            auto inner = parse_implies();
            skip_space();
            if (!match(")")) throw ParseError(pos_, "')'");
            return inner;
        }
        const char c = text_[pos_];
        if (std::isupper(static_cast<unsigned char>(c))) {
            if (match_word("TRUE")) return constant(true);
            if (match_word("FALSE")) return constant(false);
            if (match_word("LIAR")) return liar();
            throw ParseError(pos_, "TRUE, FALSE or LIAR");
        }
        if (c >= 'a' && c <= 'z') {
            const std::size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size() && (std::islower(static_cast<unsigned char>(
                                               text_[pos_])) ||
                                           std::isdigit(static_cast<unsigned char>(
                                               text_[pos_])) ||
                                           text_[pos_] == '_'))
                ++pos_;
            return atom(text_.substr(start, pos_ - start));
        }
        throw ParseError(pos_, "a sentence");
    }

    void skip_space() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool match(const std::string& token) {
        if (text_.compare(pos_, token.size(), token) != 0) return false;
        pos_ += token.size();
        return true;
    }

    // Match a keyword that must not run into further word characters.
    bool match_word(const std::string& word) {
        if (text_.compare(pos_, word.size(), word) != 0) return false;
        const std::size_t end = pos_ + word.size();
        if (end < text_.size()) {
            const char next = text_[end];
            if (std::isalnum(static_cast<unsigned char>(next)) || next == '_')
                return false;
        }
        pos_ = end;
        return true;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline SentencePtr parse_sentence(const std::string& text) {
    return detail::Parser(text).parse();
}

/// Render with the fewest parentheses that re-parse to the same tree.
inline std::string to_text(const Sentence& s) {
    // Higher binds tighter; primaries get the top rank.
    const auto prec = [](Kind k) {
        switch (k) {
            case Kind::Implies: return 1;
            case Kind::Or: return 2;
            case Kind::And: return 3;
            case Kind::Not: return 4;
            default: return 5;
        }
    };
    const auto wrap = [](std::string text, bool parens) {
        return parens ? "(" + std::move(text) + ")" : std::move(text);
    };
    switch (s.kind) {
        case Kind::Atom: return s.name;
        case Kind::ConstTrue: return "TRUE";
        case Kind::ConstFalse: return "FALSE";
        case Kind::Liar: return "LIAR";
        case Kind::Not:
            return "!" + wrap(to_text(*s.left), prec(s.left->kind) < prec(Kind::Not));
        case Kind::And:
        case Kind::Or: { // left-associative
            const int p = prec(s.kind);
            const char* op = s.kind == Kind::And ? " & " : " | ";
            return wrap(to_text(*s.left), prec(s.left->kind) < p) + op +
                   wrap(to_text(*s.right), prec(s.right->kind) <= p);
        }
        case Kind::Implies: // right-associative
            return wrap(to_text(*s.left), prec(s.left->kind) <= 1) + " -> " +
                   wrap(to_text(*s.right), prec(s.right->kind) < 1);
    }
    throw std::logic_error("unhandled sentence kind");
}

/// CLI assignment syntax: comma-separated `name=0` / `name=1` pairs; the
/// empty string is the empty assignment.
inline Assignment parse_assignment(const std::string& text) {
    Assignment assignment;
    std::size_t pos = 0;
    if (text.empty()) return assignment;
    for (;;) {
        const std::size_t start = pos;
        if (pos >= text.size() || !(text[pos] >= 'a' && text[pos] <= 'z'))
            throw ParseError(pos, "an atom name");
        ++pos;
        while (pos < text.size() &&
               (std::islower(static_cast<unsigned char>(text[pos])) ||
                std::isdigit(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_'))
            ++pos;
        const std::string name = text.substr(start, pos - start);
        if (pos >= text.size() || text[pos] != '=') throw ParseError(pos, "'='");
        ++pos;
        if (pos >= text.size() || (text[pos] != '0' && text[pos] != '1'))
            throw ParseError(pos, "'0' or '1'");
        assignment[name] = text[pos] == '1';
        ++pos;
        if (pos == text.size()) return assignment;
        if (text[pos] != ',') throw ParseError(pos, "','");
        ++pos;
    }
}

} // namespace limitlab::ak
