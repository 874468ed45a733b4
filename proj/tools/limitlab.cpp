#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limitlab/ak.hpp"
#include "limitlab/bitstring.hpp"
#include "limitlab/complexity.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/halting.hpp"
#include "limitlab/realgen.hpp"
#include "limitlab/toyvm.hpp"

namespace {

// Flag combinations CLI11 cannot express; reported on stderr with exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

limitlab::BitString parse_bits(const std::string& text) {
    for (const char ch : text)
        if (ch != '0' && ch != '1')
            throw UsageError("bit strings may contain only '0' and '1': got \"" +
                             text + "\"");
    return limitlab::BitString::from_text(text);
}

std::uint64_t parse_number(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    std::size_t consumed = 0;
    try {
        value = std::stoull(text, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != text.size() || text.empty())
        throw UsageError(what + " must be a nonnegative integer, got \"" + text + "\"");
    return value;
}

// --input r0=3,r1=5 -> register file (unmentioned registers start at zero).
std::vector<std::uint64_t> parse_inputs(const std::string& text) {
    std::vector<std::uint64_t> regs;
    if (text.empty()) return regs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (item.size() < 2 || item[0] != 'r' || eq == std::string::npos)
            throw UsageError("--input entries look like r0=3, got \"" + item + "\"");
        const std::uint64_t index = parse_number(item.substr(1, eq - 1), "register index");
        const std::uint64_t value = parse_number(item.substr(eq + 1), "register value");
        if (index > limitlab::halting::kMaxRegisterIndex)
            throw UsageError("register index " + std::to_string(index) + " exceeds r" +
                             std::to_string(limitlab::halting::kMaxRegisterIndex));
        if (regs.size() <= index) regs.resize(index + 1, 0);
        regs[index] = value;
    }
    return regs;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit_registers(std::ostream& os, const std::vector<std::uint64_t>& regs) {
    os << '[';
    for (std::size_t i = 0; i < regs.size(); ++i) {
        if (i) os << ", ";
        os << regs[i];
    }
    os << ']';
}

void emit_run_report(const limitlab::halting::RunReport& r, std::ostream& os) {
    using limitlab::halting::RunOutcome;
    for (const auto h : r.heartbeats) os << "{\"heartbeat\": " << h << "}\n";
    os << "{\"outcome\": \"" << to_string(r.outcome) << "\", \"steps\": " << r.steps;
    if (r.outcome == RunOutcome::CycleDetected)
        os << ", \"first_step\": " << r.first_step << ", \"period\": " << r.period;
    os << ", \"registers\": ";
    emit_registers(os, r.final_regs);
    if (r.outcome == RunOutcome::BudgetExhausted)
        os << ", \"warning\": \"" << r.warning << "\"";
    os << "}\n";
}

} // namespace

int main(int argc, char** argv) {
    using namespace limitlab;

    CLI::App app{"limitlab: a finite laboratory for limitative constructions"};
    app.require_subcommand(1);

    // enum --len N
    std::uint64_t enum_len = 0;
    auto* cmd_enum = app.add_subcommand("enum", "List every bit string of one length");
    cmd_enum->add_option("--len", enum_len, "string length n")->required();

    // square --n N
    std::uint64_t square_n = 0;
    auto* cmd_square =
        app.add_subcommand("square", "First n length-n strings and their flipped antidiagonal");
    cmd_square->add_option("--n", square_n, "side length")->required();

    // k-table --max-prog-len L [--out FILE]
    std::uint64_t table_len = 0;
    std::string table_out;
    auto* cmd_table =
        app.add_subcommand("k-table", "Minimal description lengths by exhaustive search");
    cmd_table->add_option("--max-prog-len", table_len, "longest program to try")->required();
    auto* table_out_opt = cmd_table->add_option("--out", table_out, "write here instead of stdout");

    // filter --len N --m M [--c C]
    std::uint64_t filter_len = 0, filter_m = 0, filter_c = 0;
    auto* cmd_filter = app.add_subcommand("filter", "Keep the m-noncompressible strings");
    cmd_filter->add_option("--len", filter_len, "string length n")->required();
    cmd_filter->add_option("--m", filter_m, "compression margin")->required();
    cmd_filter->add_option("--c", filter_c, "machine constant");

    // decide --string BITS --m M [--c C]
    std::string decide_bits;
    std::uint64_t decide_m = 0, decide_c = 0;
    auto* cmd_decide = app.add_subcommand("decide", "Test one string for m-noncompressibility");
    cmd_decide->add_option("--string", decide_bits, "the bit string")->required();
    cmd_decide->add_option("--m", decide_m, "compression margin")->required();
    cmd_decide->add_option("--c", decide_c, "machine constant");

    // census --len N --max-prog-len L
    std::uint64_t census_len = 0, census_table_len = 0;
    auto* cmd_census =
        app.add_subcommand("census", "Partition a level by minimal description length");
    cmd_census->add_option("--len", census_len, "string length n")->required();
    cmd_census->add_option("--max-prog-len", census_table_len, "longest program to try")
        ->required();

    // real --seed S --bits N [--m M --c C]
    std::uint64_t real_seed = 0, real_bits = 0, real_m = 0, real_c = 0;
    std::string real_entropy;
    auto* cmd_real = app.add_subcommand("real", "Stream the prefixes of a generated real");
    auto* real_seed_opt = cmd_real->add_option("--seed", real_seed, "deterministic bit source");
    auto* real_entropy_opt =
        cmd_real->add_option("--entropy", real_entropy, "opt in to OS randomness")
            ->check(CLI::IsMember({"os"}));
    cmd_real->add_option("--bits", real_bits, "prefix length to reach")->required();
    auto* real_m_opt = cmd_real->add_option("--m", real_m, "emit only m-noncompressible prefixes");
    cmd_real->add_option("--c", real_c, "machine constant")->needs(real_m_opt);
    real_seed_opt->excludes(real_entropy_opt);

    // find --target BITS
    std::string find_bits;
    auto* cmd_find = app.add_subcommand("find", "Count rank steps until a target appears");
    cmd_find->add_option("--target", find_bits, "the bit string to wait for")->required();

    // halt run|test PROGFILE ... ; halt arena --scenario ...
    auto* cmd_halt = app.add_subcommand("halt", "Counter machine execution and testing");
    cmd_halt->require_subcommand(1);
    std::string halt_file, halt_input;
    std::uint64_t halt_budget = 0, halt_heartbeat = 1024;
    auto* cmd_halt_run = cmd_halt->add_subcommand("run", "Execute a counter machine program");
    cmd_halt_run->add_option("progfile", halt_file, "assembly file")->required();
    cmd_halt_run->add_option("--budget", halt_budget, "max instructions")->required();
    cmd_halt_run->add_option("--heartbeat", halt_heartbeat, "progress cadence");
    cmd_halt_run->add_option("--input", halt_input, "initial registers, e.g. r0=3,r1=5");
    auto* cmd_halt_test = cmd_halt->add_subcommand("test", "Budgeted halting verdict");
    cmd_halt_test->add_option("progfile", halt_file, "assembly file")->required();
    cmd_halt_test->add_option("--budget", halt_budget, "max instructions")->required();
    cmd_halt_test->add_option("--heartbeat", halt_heartbeat, "progress cadence");
    cmd_halt_test->add_option("--input", halt_input, "initial registers, e.g. r0=3,r1=5");
    std::string arena_scenario;
    std::uint64_t arena_budget = halting::kDefaultArenaBudget;
    bool arena_sequential = false;
    auto* cmd_halt_arena =
        cmd_halt->add_subcommand("arena", "Tester-vs-tester lockstep simulation");
    cmd_halt_arena->add_option("--scenario", arena_scenario, "classic or paper_escape")
        ->required()
        ->check(CLI::IsMember({"classic", "paper_escape"}));
    cmd_halt_arena->add_option("--budget", arena_budget, "ticks before giving up");
    cmd_halt_arena->add_flag("--sequential", arena_sequential,
                             "run the subject to completion before observing");

    // ak eval --formula TEXT [--assign p=1,q=0] [--mode kleene|ak]
    auto* cmd_ak = app.add_subcommand("ak", "Three-valued propositional evaluation");
    cmd_ak->require_subcommand(1);
    std::string ak_formula, ak_assign, ak_mode = "kleene";
    auto* cmd_ak_eval = cmd_ak->add_subcommand("eval", "Evaluate one sentence");
    cmd_ak_eval->add_option("--formula", ak_formula, "sentence text")->required();
    cmd_ak_eval->add_option("--assign", ak_assign, "atom values, e.g. p=1,q=0");
    cmd_ak_eval->add_option("--mode", ak_mode, "kleene (three-valued) or ak (collapsed)")
        ->check(CLI::IsMember({"kleene", "ak"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_enum->parsed()) {
            for (const auto& s : enumerate_level(enum_len).rows)
                std::cout << s.text() << '\n';
        } else if (cmd_square->parsed()) {
            const auto sq = square_matrix(square_n);
            for (std::size_t i = 0; i < sq.rows.size(); ++i)
                std::cout << "{\"row\": " << i << ", \"bits\": \"" << sq.rows[i].text()
                          << "\"}\n";
            std::cout << "{\"antidiagonal\": \"" << antidiagonal_flip(sq).text()
                      << "\"}\n";
        } else if (cmd_table->parsed()) {
            const auto table = toyvm::min_description_table(table_len);
            if (table_out_opt->count() > 0) {
                std::ofstream out(table_out);
                if (!out) throw std::runtime_error("cannot open output file: " + table_out);
                toyvm::write_ndjson(table, out);
            } else {
                toyvm::write_ndjson(table, std::cout);
            }
        } else if (cmd_filter->parsed()) {
            const complexity::CompressibilityParams params{filter_m, filter_c};
            for (const auto& s : complexity::filter_noncompressible(filter_len, params))
                std::cout << s.text() << '\n';
        } else if (cmd_decide->parsed()) {
            const complexity::CompressibilityParams params{decide_m, decide_c};
            const bool keep = complexity::is_m_noncompressible(parse_bits(decide_bits), params);
            std::cout << "{\"noncompressible\": " << (keep ? "true" : "false") << "}\n";
        } else if (cmd_census->parsed()) {
            complexity::write_ndjson(complexity::compression_census(census_len, census_table_len),
                                     std::cout);
        } else if (cmd_real->parsed()) {
            if (real_seed_opt->count() == 0 && real_entropy_opt->count() == 0)
                throw UsageError(
                    "pass --seed S for reproducible output, or --entropy os to opt in to "
                    "OS randomness");
            std::unique_ptr<realgen::BitSource> source;
            if (real_seed_opt->count() > 0)
                source = std::make_unique<realgen::SeededSource>(real_seed);
            else
                source = std::make_unique<realgen::OsEntropySource>();
            if (real_m_opt->count() > 0) {
                const complexity::CompressibilityParams params{real_m, real_c};
                realgen::NoncompressibleStream stream(*source, params, real_bits);
                while (auto item = stream.next()) realgen::write_ndjson(*item, std::cout);
            } else {
                realgen::RealStream stream(*source, real_bits);
                while (auto prefix = stream.next())
                    realgen::write_ndjson({*prefix, realgen::StreamEvent::Emit}, std::cout);
            }
        } else if (cmd_find->parsed()) {
            const auto count = realgen::find_target(parse_bits(find_bits));
            std::cout << "{\"target\": \"" << find_bits << "\", \"count\": " << count << "}\n";
        } else if (cmd_halt_run->parsed()) {
            const auto program = halting::parse_program(read_file(halt_file));
            const auto report =
                halting::run(program, parse_inputs(halt_input), halt_budget, halt_heartbeat);
            emit_run_report(report, std::cout);
            if (!report.warning.empty()) std::cerr << "warning: " << report.warning << '\n';
        } else if (cmd_halt_test->parsed()) {
            const auto program = halting::parse_program(read_file(halt_file));
            const auto result = halting::test_halting(program, parse_inputs(halt_input),
                                                      halt_budget, halt_heartbeat);
            std::cout << "{\"verdict\": \"" << to_string(result.verdict) << "\", \"symbol\": \""
                      << verdict_symbol(result.verdict)
                      << "\", \"steps\": " << result.report.steps;
            if (result.verdict == halting::TesterVerdict::Loops)
                std::cout << ", \"first_step\": " << result.report.first_step
                          << ", \"period\": " << result.report.period;
            std::cout << "}\n";
        } else if (cmd_halt_arena->parsed()) {
            halting::LargeTesterTrace trace;
            if (arena_scenario == "classic") {
                if (arena_sequential)
                    throw UsageError("--sequential applies only to --scenario paper_escape");
                trace = halting::diagonal_scenario(halting::DiagonalKind::Classic, arena_budget);
            } else {
                trace = halting::large_tester(halting::Scenario::ReflexiveEscape, arena_budget,
                                              arena_sequential);
            }
            halting::write_ndjson(trace, std::cout);
            std::cout << "{\"verdict\": \"" << symbol(trace.verdict) << "\"}\n";
        } else if (cmd_ak_eval->parsed()) {
            const auto sentence = ak::parse_sentence(ak_formula);
            const auto assignment = ak::parse_assignment(ak_assign);
            // Evaluate before printing: a failed evaluation must leave stdout empty.
            if (ak_mode == "kleene") {
                const auto value = ak::evaluate_kleene(*sentence, assignment);
                std::cout << "{\"value\": \"" << to_string(value) << "\"}\n";
            } else {
                const bool value = ak::evaluate_ak(*sentence, assignment);
                std::cout << "{\"value\": " << (value ? "true" : "false") << "}\n";
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
