#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "limitlab/errors.hpp"

namespace limitlab::halting {

// ---------------------------------------------------------------------------
// Counter machine.
// ---------------------------------------------------------------------------

struct Inc {
    std::size_t reg;
    bool operator==(const Inc&) const = default;
};
/// Decrement reg and fall through; jump to target when reg is zero.
struct Decjz {
    std::size_t reg;
    std::size_t target;
    bool operator==(const Decjz&) const = default;
};
struct Halt {
    bool operator==(const Halt&) const = default;
};
using Instruction = std::variant<Inc, Decjz, Halt>;

constexpr std::size_t kMaxRegisterIndex = 255;

struct MinskyProgram {
    std::vector<Instruction> instructions;
};

/// Reject programs run() cannot execute: empty bodies, out-of-range jump
/// targets, oversized register indices.
inline void validate(const MinskyProgram& p) {
    if (p.instructions.empty()) throw MalformedProgram("program has no instructions");
    for (std::size_t i = 0; i < p.instructions.size(); ++i) {
        const auto& ins = p.instructions[i];
        std::size_t reg = 0;
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            reg = inc->reg;
        } else if (const auto* dec = std::get_if<Decjz>(&ins)) {
            reg = dec->reg;
            if (dec->target >= p.instructions.size())
                throw MalformedProgram("instruction " + std::to_string(i) +
                                       " jumps to index " + std::to_string(dec->target) +
                                       ", past the end");
        }
        if (reg > kMaxRegisterIndex)
            throw MalformedProgram("instruction " + std::to_string(i) +
                                   " uses register r" + std::to_string(reg) +
                                   ", above r" + std::to_string(kMaxRegisterIndex));
    }
}

/// Assembly, one instruction per line: `INC r<k>`, `DECJZ r<k> <label>`,
/// `HALT`. A `<label>:` prefix (or a label alone on a line) names the next
/// instruction; `#` starts a comment.
inline MinskyProgram parse_program(const std::string& text) {
    struct PendingJump {
        std::size_t instr;
        std::string label;
        std::size_t line_no;
    };
    MinskyProgram program;
    std::map<std::string, std::size_t> labels;
    std::vector<PendingJump> pending;

    const auto is_label_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    const auto parse_reg = [](const std::string& token, std::size_t line_no) {
        if (token.size() < 2 || token[0] != 'r')
            throw MalformedProgram("line " + std::to_string(line_no) +
                                   ": expected register, got '" + token + "'");
        std::size_t value = 0;
        for (std::size_t i = 1; i < token.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(token[i])))
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": expected register, got '" + token + "'");
            value = value * 10 + static_cast<std::size_t>(token[i] - '0');
            if (value > kMaxRegisterIndex)
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": register above r" +
                                       std::to_string(kMaxRegisterIndex));
        }
        return value;
    };

    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);

        std::vector<std::string> tokens;
        std::istringstream words(line);
        for (std::string word; words >> word;) tokens.push_back(word);
        if (tokens.empty()) continue;

        // Peel off label prefixes ("name:" or "name :" is not split by the
        // tokenizer, so only the attached form occurs).
        std::size_t t = 0;
        while (t < tokens.size() && tokens[t].back() == ':') {
            std::string name = tokens[t].substr(0, tokens[t].size() - 1);
            if (name.empty() ||
                std::isdigit(static_cast<unsigned char>(name[0])) ||
                !std::ranges::all_of(name, is_label_char))
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": bad label '" + tokens[t] + "'");
            if (!labels.emplace(name, program.instructions.size()).second)
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": duplicate label '" + name + "'");
            ++t;
        }
        if (t == tokens.size()) continue; // label-only line names what follows

        const std::string& op = tokens[t];
        const std::size_t argc = tokens.size() - t - 1;
        if (op == "INC") {
            if (argc != 1)
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": INC takes one register");
            program.instructions.push_back(Inc{parse_reg(tokens[t + 1], line_no)});
        } else if (op == "DECJZ") {
            if (argc != 2)
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": DECJZ takes a register and a label");
            pending.push_back({program.instructions.size(), tokens[t + 2], line_no});
            program.instructions.push_back(Decjz{parse_reg(tokens[t + 1], line_no), 0});
        } else if (op == "HALT") {
            if (argc != 0)
                throw MalformedProgram("line " + std::to_string(line_no) +
                                       ": HALT takes no arguments");
            program.instructions.push_back(Halt{});
        } else {
            throw MalformedProgram("line " + std::to_string(line_no) +
                                   ": unknown instruction '" + op + "'");
        }
    }

    for (const auto& jump : pending) {
        const auto it = labels.find(jump.label);
        if (it == labels.end())
            throw MalformedProgram("line " + std::to_string(jump.line_no) +
                                   ": unresolved label '" + jump.label + "'");
        if (it->second >= program.instructions.size())
            throw MalformedProgram("label '" + jump.label +
                                   "' points past the last instruction");
        std::get<Decjz>(program.instructions[jump.instr]).target = it->second;
    }
    validate(program);
    return program;
}

// ---------------------------------------------------------------------------
// Execution.
// ---------------------------------------------------------------------------

struct MachineState {
    std::size_t pc = 0;
    std::vector<std::uint64_t> regs;

    bool operator==(const MachineState&) const = default;
};

struct MachineStateHash {
    std::size_t operator()(const MachineState& s) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        const auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ULL;
        };
        mix(s.pc);
        for (const auto r : s.regs) mix(r);
        return static_cast<std::size_t>(h);
    }
};

enum class RunOutcome { Halted, CycleDetected, BudgetExhausted };

inline const char* to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::Halted: return "halted";
        case RunOutcome::CycleDetected: return "cycle_detected";
        case RunOutcome::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

constexpr const char* kBudgetWarning = "possible lack of halt";

/// Outcome of a bounded run. Steps are 1-indexed: state k is the machine
/// state before executing step k, so a CycleDetected report with
/// first_step=j, period=p says state j+p equalled state j — a genuine
/// non-halting witness (the witness pair is that state).
struct RunReport {
    RunOutcome outcome = RunOutcome::Halted;
    std::uint64_t steps = 0; // instructions actually executed
    std::vector<std::uint64_t> final_regs;
    std::vector<std::uint64_t> heartbeats; // step numbers, every heartbeat_every-th

    // CycleDetected only:
    std::uint64_t first_step = 0;
    std::uint64_t period = 0;
    std::optional<MachineState> witness;

    // BudgetExhausted only:
    std::uint64_t budget = 0;
    std::string warning;
};

/// Execute at most `budget` instructions, checking each pre-execution state
/// against all earlier ones (exact full-state comparison) before spending
/// budget on it. Running past the last instruction halts.
inline RunReport run(const MinskyProgram& p, const std::vector<std::uint64_t>& input,
                     std::uint64_t budget, std::uint64_t heartbeat_every) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (heartbeat_every < 1) throw std::invalid_argument("heartbeat_every must be >= 1");
    validate(p);

    std::size_t num_regs = input.size();
    for (const auto& ins : p.instructions) {
        if (const auto* inc = std::get_if<Inc>(&ins))
            num_regs = std::max(num_regs, inc->reg + 1);
        else if (const auto* dec = std::get_if<Decjz>(&ins))
            num_regs = std::max(num_regs, dec->reg + 1);
    }

    MachineState state;
    state.regs.assign(num_regs, 0);
    for (std::size_t i = 0; i < input.size(); ++i) state.regs[i] = input[i];

    RunReport report;
    std::unordered_map<MachineState, std::uint64_t, MachineStateHash> seen;
    std::uint64_t steps = 0;

    for (;;) {
        if (state.pc >= p.instructions.size()) { // fell past the end: halt
            report.outcome = RunOutcome::Halted;
            break;
        }
        if (const auto it = seen.find(state); it != seen.end()) {
            report.outcome = RunOutcome::CycleDetected;
            report.first_step = it->second;
            report.period = steps + 1 - it->second;
            report.witness = state;
            break;
        }
        if (steps >= budget) {
            report.outcome = RunOutcome::BudgetExhausted;
            report.budget = budget;
            report.warning = kBudgetWarning;
            break;
        }
        seen.emplace(state, steps + 1);

        const Instruction& ins = p.instructions[state.pc];
        bool halted = false;
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            ++state.regs[inc->reg];
            ++state.pc;
        } else if (const auto* dec = std::get_if<Decjz>(&ins)) {
            if (state.regs[dec->reg] == 0) {
                state.pc = dec->target;
            } else {
                --state.regs[dec->reg];
                ++state.pc;
            }
        } else {
            halted = true;
        }
        ++steps;
        if (steps % heartbeat_every == 0) report.heartbeats.push_back(steps);
        if (halted) {
            report.outcome = RunOutcome::Halted;
            break;
        }
    }

    report.steps = steps;
    report.final_regs = state.regs;
    return report;
}

// ---------------------------------------------------------------------------
// The bounded tester T.
// ---------------------------------------------------------------------------

enum class TesterVerdict { Halts, Loops, Unknown };

inline const char* to_string(TesterVerdict v) {
    switch (v) {
        case TesterVerdict::Halts: return "Halts";
        case TesterVerdict::Loops: return "Loops";
        case TesterVerdict::Unknown: return "Unknown";
    }
    return "?";
}

/// The 1/0 channel of the tested testers; Unknown is the honest "ran out of
/// budget" answer.
inline const char* verdict_symbol(TesterVerdict v) {
    switch (v) {
        case TesterVerdict::Halts: return "1";
        case TesterVerdict::Loops: return "0";
        case TesterVerdict::Unknown: return "unknown";
    }
    return "?";
}

struct TestResult {
    TesterVerdict verdict = TesterVerdict::Unknown;
    RunReport report; // the transcript backing the verdict
};

inline TestResult test_halting(const MinskyProgram& p,
                               const std::vector<std::uint64_t>& input,
                               std::uint64_t budget,
                               std::uint64_t heartbeat_every = 1024) {
    TestResult result;
    result.report = run(p, input, budget, heartbeat_every);
    switch (result.report.outcome) {
        case RunOutcome::Halted: result.verdict = TesterVerdict::Halts; break;
        case RunOutcome::CycleDetected: result.verdict = TesterVerdict::Loops; break;
        case RunOutcome::BudgetExhausted: result.verdict = TesterVerdict::Unknown; break;
    }
    return result;
}

inline TesterVerdict tester_T(const MinskyProgram& p,
                              const std::vector<std::uint64_t>& input,
                              std::uint64_t budget) {
    return test_halting(p, input, budget).verdict;
}

// ---------------------------------------------------------------------------
// The monitor T'.
// ---------------------------------------------------------------------------

enum class TStatus { Running, HaltedWithVerdict, LoopDetected };
enum class TprimeAction { ContinueObserving, LoopForever, Return0 };

inline const char* to_string(TStatus s) {
    switch (s) {
        case TStatus::Running: return "running";
        case TStatus::HaltedWithVerdict: return "halted_with_verdict";
        case TStatus::LoopDetected: return "loop_detected";
    }
    return "?";
}

inline const char* to_string(TprimeAction a) {
    switch (a) {
        case TprimeAction::ContinueObserving: return "continue_observing";
        case TprimeAction::LoopForever: return "loop_forever";
        case TprimeAction::Return0: return "return_0";
    }
    return "?";
}

/// The whole of T': watch T, keep quiet while it works, go silent forever
/// if it answers, answer 0 if it is stuck.
constexpr TprimeAction monitor_Tprime(TStatus status) noexcept {
    switch (status) {
        case TStatus::Running: return TprimeAction::ContinueObserving;
        case TStatus::HaltedWithVerdict: return TprimeAction::LoopForever;
        case TStatus::LoopDetected: return TprimeAction::Return0;
    }
    return TprimeAction::ContinueObserving; // unreachable
}

// ---------------------------------------------------------------------------
// The large tester: T and T' in lockstep over a shared subject.
// ---------------------------------------------------------------------------

/// What the large tester watches. Subjects are deterministic; state_key() is
/// an exact serialization of the full subject state, so key equality is
/// state equality.
class Subject {
public:
    virtual ~Subject() = default;
    virtual void step() = 0; // no-op once halted
    virtual bool halted() const = 0;
    virtual std::string state_key() const = 0;
};

class MinskySubject final : public Subject {
public:
    MinskySubject(MinskyProgram program, std::vector<std::uint64_t> input)
        : program_(std::move(program)) {
        validate(program_);
        std::size_t num_regs = input.size();
        for (const auto& ins : program_.instructions) {
            if (const auto* inc = std::get_if<Inc>(&ins))
                num_regs = std::max(num_regs, inc->reg + 1);
            else if (const auto* dec = std::get_if<Decjz>(&ins))
                num_regs = std::max(num_regs, dec->reg + 1);
        }
        state_.regs.assign(num_regs, 0);
        for (std::size_t i = 0; i < input.size(); ++i) state_.regs[i] = input[i];
    }

    void step() override {
        if (halted_) return;
        const Instruction& ins = program_.instructions[state_.pc];
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            ++state_.regs[inc->reg];
            ++state_.pc;
        } else if (const auto* dec = std::get_if<Decjz>(&ins)) {
            if (state_.regs[dec->reg] == 0) {
                state_.pc = dec->target;
            } else {
                --state_.regs[dec->reg];
                ++state_.pc;
            }
        } else {
            halted_ = true;
        }
        // Matches run(): falling past the last instruction halts, and the
        // step that walked off the end is the final one.
        if (state_.pc >= program_.instructions.size()) halted_ = true;
    }

    bool halted() const override { return halted_; }

    std::string state_key() const override {
        std::string key = "pc=" + std::to_string(state_.pc);
        for (const auto r : state_.regs) key += "," + std::to_string(r);
        return key;
    }

private:
    MinskyProgram program_;
    MachineState state_;
    bool halted_ = false;
};

/// The adversarial S while it waits on its own query: it asked the tester
/// about itself and can do nothing until an answer arrives, so after one
/// setup step its state is constant. It never halts on its own.
class ReflexiveScriptSubject final : public Subject {
public:
    void step() override { started_ = true; }
    bool halted() const override { return false; }
    std::string state_key() const override {
        return started_ ? "awaiting_query" : "start";
    }

private:
    bool started_ = false;
};

enum class Scenario { PlainHalting, ReflexiveEscape, BothLooping };

enum class ArenaVerdict { HaltsOne, LoopsZero, Unknown, Contradiction };

inline const char* symbol(ArenaVerdict v) {
    switch (v) {
        case ArenaVerdict::HaltsOne: return "1";
        case ArenaVerdict::LoopsZero: return "0";
        case ArenaVerdict::Unknown: return "unknown";
        case ArenaVerdict::Contradiction: return "ContradictionDetected";
    }
    return "?";
}

struct TickEvent {
    std::uint64_t tick = 0;
    std::string t_status;
    std::string tprime_action;
    std::optional<std::string> verdict;

    bool operator==(const TickEvent&) const = default;
};

struct LargeTesterTrace {
    std::vector<TickEvent> ticks;
    ArenaVerdict verdict = ArenaVerdict::Unknown;
};

/// ndjson form: {"tick": n, "t": "<status>", "tprime": "<action>"} with a
/// "verdict" member on ticks that produce one.
inline void write_ndjson(const LargeTesterTrace& trace, std::ostream& os) {
    for (const auto& e : trace.ticks) {
        os << "{\"tick\": " << e.tick << ", \"t\": \"" << e.t_status
           << "\", \"tprime\": \"" << e.tprime_action << "\"";
        if (e.verdict) os << ", \"verdict\": \"" << *e.verdict << "\"";
        os << "}\n";
    }
}

constexpr std::uint64_t kDefaultArenaBudget = 64;

inline std::unique_ptr<Subject> make_subject(Scenario scenario) {
    switch (scenario) {
        case Scenario::PlainHalting: {
            // Two increments, then an explicit halt.
            MinskyProgram p;
            p.instructions = {Inc{0}, Inc{0}, Halt{}};
            return std::make_unique<MinskySubject>(std::move(p),
                                                   std::vector<std::uint64_t>{});
        }
        case Scenario::ReflexiveEscape:
            return std::make_unique<ReflexiveScriptSubject>();
        case Scenario::BothLooping: {
            // r0 grows forever: no state ever repeats, nothing to detect.
            MinskyProgram p;
            p.instructions = {Inc{0}, Decjz{1, 0}};
            return std::make_unique<MinskySubject>(std::move(p),
                                                   std::vector<std::uint64_t>{});
        }
    }
    throw std::invalid_argument("unknown scenario");
}

/// One tick: T advances the subject one step and publishes its status; T'
/// observes that status — upgraded to LoopDetected when T's subject state
/// exactly revisits an earlier one — and acts by the monitor rule. The first
/// terminal output from either component is the verdict: T's own answer "1"
/// when the subject halts, T's "0" via T's Return0 when a loop is caught.
/// If the budget runs out first, the last tick carries the explicit
/// "BothLooping" marker and the verdict is Unknown.
inline LargeTesterTrace large_tester(Scenario scenario, std::uint64_t budget,
                                     bool sequential = false) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    const auto subject = make_subject(scenario);
    LargeTesterTrace trace;

    if (sequential) {
        // T runs to completion (or budget) alone; T' only gets one look at
        // the aftermath, with no state history to compare against.
        std::uint64_t tick = 0;
        while (tick < budget) {
            subject->step();
            ++tick;
            TickEvent event{tick, "", "idle", std::nullopt};
            if (subject->halted()) {
                event.t_status = to_string(TStatus::HaltedWithVerdict);
                event.verdict = "1";
                trace.ticks.push_back(std::move(event));
                trace.verdict = ArenaVerdict::HaltsOne;
                break;
            }
            event.t_status = to_string(TStatus::Running);
            trace.ticks.push_back(std::move(event));
        }
        const TStatus status = subject->halted() ? TStatus::HaltedWithVerdict
                                                 : TStatus::Running;
        const TprimeAction action = monitor_Tprime(status);
        TickEvent event{tick + 1, to_string(status), to_string(action), std::nullopt};
        if (trace.verdict == ArenaVerdict::Unknown) event.verdict = "unknown";
        trace.ticks.push_back(std::move(event));
        return trace;
    }

    std::unordered_set<std::string> seen;
    for (std::uint64_t tick = 1; tick <= budget; ++tick) {
        subject->step();
        TStatus status = TStatus::Running;
        if (subject->halted()) {
            status = TStatus::HaltedWithVerdict;
        } else if (!seen.insert(subject->state_key()).second) {
            status = TStatus::LoopDetected;
        }
        const TprimeAction action = monitor_Tprime(status);
        TickEvent event{tick, to_string(status), to_string(action), std::nullopt};
        if (status == TStatus::HaltedWithVerdict) {
            event.verdict = "1";
            trace.ticks.push_back(std::move(event));
            trace.verdict = ArenaVerdict::HaltsOne;
            return trace;
        }
        if (action == TprimeAction::Return0) {
            event.verdict = "0";
            trace.ticks.push_back(std::move(event));
            trace.verdict = ArenaVerdict::LoopsZero;
            return trace;
        }
        trace.ticks.push_back(std::move(event));
    }
    trace.ticks.back().verdict = "BothLooping";
    trace.verdict = ArenaVerdict::Unknown;
    return trace;
}

// ---------------------------------------------------------------------------
// Diagonal scenarios.
// ---------------------------------------------------------------------------

enum class DiagonalKind { Classic, PaperEscape };

/// The Minsky stand-in for S blocked on its own query: one setup step, then
/// a constant wait state. Testing it is what "T examines S" amounts to once
/// S has delegated its behavior to T's answer.
inline MinskyProgram blocked_self_query() {
    MinskyProgram p;
    p.instructions = {Inc{0}, Decjz{1, 1}};
    return p;
}

/// Classic: probe tester_T on the blocked S, then replay S armed with the
/// answer. S inverts any definite verdict (halts on "Loops", loops on
/// "Halts"), so a definite probe convicts T of a wrong answer —
/// ContradictionDetected. An Unknown probe gives S nothing to invert: it
/// halts, and the trace ends Unknown.
///
/// PaperEscape: the same S inside the large tester, where T' watches T chase
/// the regress and returns 0 on its own channel.
inline LargeTesterTrace diagonal_scenario(DiagonalKind kind,
                                          std::uint64_t budget = kDefaultArenaBudget) {
    if (kind == DiagonalKind::PaperEscape)
        return large_tester(Scenario::ReflexiveEscape, budget);

    const TesterVerdict probe = tester_T(blocked_self_query(), {}, budget);
    LargeTesterTrace trace;
    trace.ticks.push_back(
        TickEvent{1, "probe", "idle", std::string(verdict_symbol(probe))});

    TickEvent replay{2, "replay", "idle", std::nullopt};
    switch (probe) {
        case TesterVerdict::Halts: // S loops to spite the verdict
        case TesterVerdict::Loops: // S halts to spite the verdict
            replay.verdict = symbol(ArenaVerdict::Contradiction);
            trace.verdict = ArenaVerdict::Contradiction;
            break;
        case TesterVerdict::Unknown: // no claim, no inversion: S just halts
            replay.verdict = symbol(ArenaVerdict::Unknown);
            trace.verdict = ArenaVerdict::Unknown;
            break;
    }
    trace.ticks.push_back(std::move(replay));
    return trace;
}

} // namespace limitlab::halting
