// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpecleave/lpecleave.h"

namespace {

enum Exit { EXIT_OK = 0, EXIT_USAGE = 1, EXIT_VALIDATION = 2, EXIT_LIMIT = 3, EXIT_BISIM = 4 };

struct SpecDeleter {
    void operator()(lpc_spec* p) const { lpc_spec_free(p); }
};
struct LtsDeleter {
    void operator()(lpc_lts* p) const { lpc_lts_free(p); }
};
struct PlanDeleter {
    void operator()(lpc_plan* p) const { lpc_plan_free(p); }
};
struct ResultDeleter {
    void operator()(lpc_pipeline_result* p) const { lpc_pipeline_result_free(p); }
};
using SpecPtr = std::unique_ptr<lpc_spec, SpecDeleter>;
using LtsPtr = std::unique_ptr<lpc_lts, LtsDeleter>;
using PlanPtr = std::unique_ptr<lpc_plan, PlanDeleter>;
using ResultPtr = std::unique_ptr<lpc_pipeline_result, ResultDeleter>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
    if (s == nullptr) {
        return {};
    }
    std::string out(s);
    lpc_string_free(s);
    return out;
}

int exit_for(lpc_status s) {
    switch (s) {
    case LPC_OK:
        return EXIT_OK;
    case LPC_ERR_ARGUMENT:
    case LPC_ERR_PARSE:
    case LPC_ERR_IO:
        return EXIT_USAGE;
    case LPC_ERR_LIMIT:
        return EXIT_LIMIT;
    default:
        return EXIT_VALIDATION;
    }
}

int report(lpc_status s) {
    std::cerr << "error: " << lpc_last_error() << "\n";
    return exit_for(s);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw CLI::ValidationError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "@file" reads the expression from a file.
std::string expression_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') {
        std::string text = read_file(arg.substr(1));
        while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) {
            text.pop_back();
        }
        return text;
    }
    return arg;
}

// One multiset per step, e.g. "a|b" becomes "⟨a,b⟩".
std::string witness_text(const std::string& lines) {
    std::string out;
    std::istringstream in(lines);
    std::string line;
    while (std::getline(in, line)) {
        if (!out.empty()) {
            out += " ";
        }
        std::string bag;
        if (line != "tau") {
            for (char c : line) {
                bag += c == '|' ? ',' : c;
            }
        }
        out += "\xE2\x9F\xA8" + bag + "\xE2\x9F\xA9";
    }
    return out;
}

void print_warnings(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::cerr << "warning: " << line << "\n";
    }
}

struct LimitArgs {
    lpc_limits limits{};
    LimitArgs() { lpc_limits_default(&limits); }
    void attach(CLI::App* app) {
        app->add_option("--nat-bound", limits.nat_bound, "Upper bound for enumerated Nat values")->capture_default_str();
        app->add_option("--max-states", limits.max_states, "State limit for exploration")->capture_default_str();
        app->add_option("--max-transitions", limits.max_transitions, "Transition limit for exploration")
            ->capture_default_str();
    }
};

lpc_status load(const std::string& path, SpecPtr& out) {
    lpc_spec* raw = nullptr;
    const lpc_status s = lpc_spec_load(path.c_str(), &raw);
    out.reset(raw);
    return s;
}

// Writes an LTS to `path`, or to stdout when the path is empty or "-".
int emit_lts(const lpc_lts* lts, const std::string& path) {
    if (path.empty() || path == "-") {
        char* text = nullptr;
        const lpc_status s = lpc_lts_to_aut(lts, &text);
        if (s != LPC_OK) {
            return report(s);
        }
        std::cout << take(text);
        return EXIT_OK;
    }
    const lpc_status s = lpc_lts_write_aut(lts, path.c_str());
    return s == LPC_OK ? EXIT_OK : report(s);
}

int emit_explored(lpc_status s, lpc_lts* raw, const std::string& output) {
    LtsPtr lts(raw);
    if (lts) {
        print_warnings(take([&] {
            char* w = nullptr;
            lpc_lts_warnings(lts.get(), &w);
            return w;
        }()));
    }
    if (s != LPC_OK) {
        if (s == LPC_ERR_LIMIT && lts) {
            std::cerr << "partial result: " << lpc_lts_num_states(lts.get()) << " states, "
                      << lpc_lts_num_transitions(lts.get()) << " transitions\n";
            emit_lts(lts.get(), output);
        }
        return report(s);
    }
    std::cerr << lpc_lts_num_states(lts.get()) << " states, " << lpc_lts_num_transitions(lts.get()) << " transitions\n";
    return emit_lts(lts.get(), output);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cleave linear process equations and minimise compositionally"};
    app.require_subcommand(1);

    LimitArgs limit_args;
    std::string spec_path, partition_path, invariant, out_dir, output, format = "text", composition;
    std::string aut_a, aut_b;
    bool no_tag = false, on_update = false, force = false;

    auto* pipeline = app.add_subcommand("pipeline", "Run cleave, component minimisation, composition and the check");
    pipeline->add_option("spec", spec_path, "Specification file")->required();
    pipeline->add_option("--partition", partition_path, "JSON file {\"V\": [...], \"W\": [...]}")->required();
    pipeline->add_option("--invariant", invariant, "Invariant expression or @file");
    pipeline->add_option("--out-dir", out_dir, "Directory for the AUT files");
    pipeline->add_flag("--no-tag-debug", no_tag, "Omit the tag action (unsound, for experiments)");
    pipeline->add_flag("--invariant-on-update", on_update, "Restrict with the invariant after the update");
    pipeline->add_flag("--force", force, "Continue past failed checks");
    pipeline->add_option("--format", format, "Table format")->check(CLI::IsMember({"text", "kv"}));
    limit_args.attach(pipeline);

    auto* explore = app.add_subcommand("explore", "Explore the state space of the initial process");
    explore->add_option("spec", spec_path, "Specification file")->required();
    explore->add_option("-o,--output", output, "Output AUT file (default stdout)");
    limit_args.attach(explore);

    auto* minimise = app.add_subcommand("minimise", "Minimise an AUT file modulo strong bisimulation");
    minimise->add_option("input", aut_a, "Input AUT file")->required();
    minimise->add_option("-o,--output", output, "Output AUT file (default stdout)");

    auto* compose = app.add_subcommand("compose", "Explore a composition declared in the specification");
    compose->add_option("spec", spec_path, "Specification file")->required();
    compose->add_option("--composition", composition, "Composition name (default the first)");
    compose->add_option("-o,--output", output, "Output AUT file (default stdout)");
    limit_args.attach(compose);

    auto* cleave = app.add_subcommand("cleave", "Compute a cleave and print its components");
    cleave->add_option("spec", spec_path, "Specification file")->required();
    cleave->add_option("--partition", partition_path, "JSON file {\"V\": [...], \"W\": [...]}")->required();
    cleave->add_option("--out-dir", out_dir, "Directory for the component specifications");
    cleave->add_flag("--no-tag-debug", no_tag, "Omit the tag action");
    cleave->add_flag("--force", force, "Print the components even if the oracle fails");
    limit_args.attach(cleave);

    auto* check_inv = app.add_subcommand("check-invariant", "Check that an expression is a state invariant");
    check_inv->add_option("spec", spec_path, "Specification file")->required();
    check_inv->add_option("--invariant", invariant, "Invariant expression or @file")->required();
    limit_args.attach(check_inv);

    auto* compare = app.add_subcommand("compare", "Decide strong bisimilarity of two AUT files");
    compare->add_option("first", aut_a, "AUT file")->required();
    compare->add_option("second", aut_b, "AUT file")->required();

    try {
        app.parse(argc, argv);
        if (!invariant.empty()) {
            invariant = expression_arg(invariant);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? EXIT_OK : EXIT_USAGE;
    }

    SpecPtr spec;
    if (!spec_path.empty()) {
        if (const lpc_status s = load(spec_path, spec); s != LPC_OK) {
            return report(s);
        }
    }
    std::string partition;
    if (!partition_path.empty()) {
        try {
            partition = read_file(partition_path);
        } catch (const CLI::ValidationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return EXIT_USAGE;
        }
    }

    if (*explore) {
        lpc_lts* raw = nullptr;
        const lpc_status s = lpc_explore(spec.get(), &limit_args.limits, &raw);
        return emit_explored(s, raw, output);
    }

    if (*compose) {
        lpc_lts* raw = nullptr;
        const lpc_status s = lpc_compose(spec.get(), composition.c_str(), &limit_args.limits, &raw);
        return emit_explored(s, raw, output);
    }

    if (*minimise) {
        lpc_lts* raw = nullptr;
        if (const lpc_status s = lpc_lts_read_aut(aut_a.c_str(), &raw); s != LPC_OK) {
            return report(s);
        }
        LtsPtr in(raw);
        if (const lpc_status s = lpc_minimise(in.get(), &raw); s != LPC_OK) {
            return report(s);
        }
        LtsPtr out(raw);
        std::cerr << lpc_lts_num_states(in.get()) << "/" << lpc_lts_num_transitions(in.get()) << " -> "
                  << lpc_lts_num_states(out.get()) << "/" << lpc_lts_num_transitions(out.get()) << "\n";
        return emit_lts(out.get(), output);
    }

    if (*compare) {
        lpc_lts* a = nullptr;
        lpc_lts* b = nullptr;
        if (const lpc_status s = lpc_lts_read_aut(aut_a.c_str(), &a); s != LPC_OK) {
            return report(s);
        }
        LtsPtr la(a);
        if (const lpc_status s = lpc_lts_read_aut(aut_b.c_str(), &b); s != LPC_OK) {
            return report(s);
        }
        LtsPtr lb(b);
        int bisimilar = 0;
        char* witness = nullptr;
        if (const lpc_status s = lpc_compare(la.get(), lb.get(), &bisimilar, &witness); s != LPC_OK) {
            return report(s);
        }
        const std::string w = take(witness);
        if (bisimilar != 0) {
            std::cout << "bisimilar\n";
            return EXIT_OK;
        }
        std::cout << "not bisimilar\nwitness: " << witness_text(w) << "\n";
        return EXIT_BISIM;
    }

    if (*check_inv) {
        int holds = 0;
        char* text = nullptr;
        if (const lpc_status s =
                lpc_check_invariant(spec.get(), invariant.c_str(), limit_args.limits.nat_bound, &holds, &text);
            s != LPC_OK) {
            return report(s);
        }
        std::cout << take(text);
        return holds != 0 ? EXIT_OK : EXIT_VALIDATION;
    }

    if (*cleave) {
        lpc_plan* raw = nullptr;
        if (const lpc_status s = lpc_cleave(spec.get(), partition.c_str(), no_tag ? 1 : 0, &raw); s != LPC_OK) {
            return report(s);
        }
        PlanPtr plan(raw);
        char* text = nullptr;
        lpc_plan_dump(plan.get(), &text);
        std::cout << take(text);
        int passed = 0;
        if (const lpc_status s = lpc_plan_oracle(plan.get(), limit_args.limits.nat_bound, &passed, &text);
            s != LPC_OK) {
            return report(s);
        }
        std::cout << take(text);
        if (passed == 0 && !force) {
            std::cerr << "error: the plan is not a cleave\n";
            return EXIT_VALIDATION;
        }
        if (passed == 0) {
            std::cout << "UNVERIFIED\n";
        }
        for (int side = 0; side < 2; ++side) {
            if (const lpc_status s = lpc_plan_component(plan.get(), side, &text); s != LPC_OK) {
                return report(s);
            }
            const std::string component = take(text);
            if (out_dir.empty()) {
                std::cout << "\n" << component;
                continue;
            }
            const std::string path = out_dir + (side == 0 ? "/V.spec" : "/W.spec");
            std::ofstream os(path);
            os << component;
            if (!os) {
                std::cerr << "error: cannot write " << path << "\n";
                return EXIT_USAGE;
            }
        }
        return EXIT_OK;
    }

    lpc_pipeline_options options;
    lpc_pipeline_options_default(&options);
    options.limits = limit_args.limits;
    options.invariant = invariant.empty() ? nullptr : invariant.c_str();
    options.invariant_on_update = on_update ? 1 : 0;
    options.no_tag = no_tag ? 1 : 0;
    options.force = force ? 1 : 0;

    lpc_pipeline_result* raw = nullptr;
    if (const lpc_status s = lpc_pipeline(spec.get(), partition.c_str(), &options, &raw); s != LPC_OK) {
        return report(s);
    }
    ResultPtr result(raw);
    const bool unverified = lpc_pipeline_unverified(result.get()) != 0;
    if (unverified) {
        std::cout << "*** UNVERIFIED: a correctness check failed and was skipped with --force ***\n";
    }
    char* text = nullptr;
    lpc_pipeline_warnings(result.get(), &text);
    print_warnings(take(text));
    if (format == "text") {
        lpc_pipeline_plan(result.get(), &text);
        std::cout << take(text) << "\n";
    }
    lpc_pipeline_table(result.get(), format == "kv" ? LPC_TABLE_KV : LPC_TABLE_TEXT, 1, &text);
    std::cout << take(text);
    if (!out_dir.empty()) {
        if (const lpc_status s = lpc_pipeline_write_artifacts(result.get(), out_dir.c_str()); s != LPC_OK) {
            return report(s);
        }
    }
    const bool bisimilar = lpc_pipeline_bisimilar(result.get()) != 0;
    if (format == "kv") {
        std::cout << "bisimilar=" << (bisimilar ? "true" : "false") << "\n";
    } else {
        std::cout << "bisimilar: " << (bisimilar ? "yes" : "no") << "\n";
    }
    if (!bisimilar) {
        lpc_pipeline_witness(result.get(), &text);
        std::cout << "witness: " << witness_text(take(text)) << "\n";
        if (unverified) {
            std::cout << "*** UNVERIFIED ***\n";
        }
        return EXIT_BISIM;
    }
    if (unverified) {
        std::cout << "*** UNVERIFIED ***\n";
    }
    return EXIT_OK;
}
