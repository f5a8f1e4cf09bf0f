// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/pipeline.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

namespace lpecleave {

long peak_memory_kib() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const LimitExceeded& e) {
        throw PipelineError(name, PipelineError::Kind::Limit, e.what());
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, PipelineError::Kind::Validation, e.what());
    }
}

void collect_warnings(const Lts& l, const std::string& name, std::vector<std::string>& out) {
    for (const auto& w : l.warnings()) {
        const std::string line = name + ": " + w;
        if (std::find(out.begin(), out.end(), line) == out.end()) {
            out.push_back(line);
        }
    }
}

} // namespace

PipelineResult run_pipeline(const SpecFile& spec, const std::vector<std::string>& v_names,
                            const std::vector<std::string>& w_names, const PipelineOptions& options) {
    PipelineResult result;
    const Lpe& p = *spec.init.lpe;
    const auto& init = spec.init.init;

    stage("validate", [&] {
        auto problems = validate_instance(spec.init);
        if (!problems.empty()) {
            throw ValidationError(to_string(problems.front()));
        }
        return 0;
    });

    result.plan = stage("cleave", [&] { return auto_cleave(p, v_names, w_names); });
    result.plan.no_tag = options.no_tag;
    result.plan_text = dump_plan(p, result.plan);

    result.oracle = stage("oracle", [&] { return check_cleave_oracle(p, result.plan, options.limits.nat_bound); });
    if (!result.oracle.passed()) {
        if (!options.force) {
            throw PipelineError("oracle", PipelineError::Kind::Validation,
                                "the plan is not a cleave\n" + to_string(result.oracle));
        }
        result.unverified = true;
    }
    if (result.oracle.truncated) {
        result.warnings.push_back("oracle: Nat domains truncated at " + std::to_string(options.limits.nat_bound));
    }

    std::optional<Expr> psi;
    if (options.invariant) {
        psi = stage("invariant", [&] { return parse_expr(*options.invariant, spec, p); });
        result.invariant = stage("invariant", [&] { return check_invariant(p, *psi, options.limits.nat_bound); });
        if (!result.invariant->holds) {
            if (!options.force) {
                throw PipelineError("invariant", PipelineError::Kind::Validation,
                                    "not a state invariant: " + to_string(result.invariant->violations.front()));
            }
            result.unverified = true;
        }
        stage("invariant", [&] {
            Environment env;
            for (std::size_t k = 0; k < p.params.size(); ++k) {
                env.bind(p.params[k].name, init[k]);
            }
            if (!evaluate(*psi, env).as_bool()) {
                throw InvariantViolatedAtInit("invariant does not hold in the initial state");
            }
            return 0;
        });
    }

    auto components = stage("induce", [&] {
        if (psi) {
            return restricted_components(p, result.plan, *psi, options.invariant_on_update);
        }
        return std::pair<Lpe, Lpe>{induce_component(p, result.plan, Side::V), induce_component(p, result.plan, Side::W)};
    });

    std::vector<std::shared_ptr<const Lts>> minimised;
    const std::pair<const Lpe*, const IndexSet*> sides[] = {{&components.first, &result.plan.v.U},
                                                            {&components.second, &result.plan.w.U}};
    std::vector<MetricsRow> component_rows;
    for (const auto& [lpe, u] : sides) {
        const auto start = Clock::now();
        const std::string name = lpe->name;
        ProcessInstance inst{std::make_shared<const Lpe>(*lpe), project(init, *u)};
        Lts explored = stage("explore " + name, [&] { return explore_lpe(inst, options.limits); });
        Minimised m = stage("minimise " + name, [&] { return minimise_bisim(explored); });
        collect_warnings(explored, name, result.warnings);
        component_rows.push_back(MetricsRow{name, explored.num_states(), explored.num_transitions(),
                                            m.quotient.num_states(), m.quotient.num_transitions(),
                                            seconds_since(start), peak_memory_kib()});
        minimised.push_back(std::make_shared<const Lts>(m.quotient));
        result.artifacts.push_back(Artifact{name + ".aut", std::move(explored)});
        result.artifacts.push_back(Artifact{name + ".min.aut", std::move(m.quotient)});
    }

    const auto comp_start = Clock::now();
    const CompositionExpr context =
        cleave_context(p, result.plan, CompositionExpr::leaf(minimised[0], components.first.name),
                       CompositionExpr::leaf(minimised[1], components.second.name));
    Lts composed = stage("compose", [&] { return explore_composition(context, options.limits); });
    Minimised composed_min = stage("minimise composition", [&] { return minimise_bisim(composed); });
    MetricsRow comp_row{"composition",
                        composed.num_states(),
                        composed.num_transitions(),
                        composed_min.quotient.num_states(),
                        composed_min.quotient.num_transitions(),
                        seconds_since(comp_start),
                        peak_memory_kib()};

    const auto mono_start = Clock::now();
    Lts mono = stage("explore " + p.name, [&] { return explore_lpe(spec.init, options.limits); });
    Minimised mono_min = stage("minimise " + p.name, [&] { return minimise_bisim(mono); });
    collect_warnings(mono, p.name, result.warnings);
    MetricsRow mono_row{p.name,
                        mono.num_states(),
                        mono.num_transitions(),
                        mono_min.quotient.num_states(),
                        mono_min.quotient.num_transitions(),
                        seconds_since(mono_start),
                        peak_memory_kib()};

    result.bisim = check_bisim(composed_min.quotient, mono_min.quotient);

    result.rows.push_back(mono_row);
    result.rows.insert(result.rows.end(), component_rows.begin(), component_rows.end());
    result.rows.push_back(comp_row);
    result.artifacts.push_back(Artifact{"composition.aut", std::move(composed)});
    result.artifacts.push_back(Artifact{"composition.min.aut", std::move(composed_min.quotient)});
    result.artifacts.insert(result.artifacts.begin(), Artifact{p.name + ".min.aut", std::move(mono_min.quotient)});
    result.artifacts.insert(result.artifacts.begin(), Artifact{p.name + ".aut", std::move(mono)});
    return result;
}

std::string format_metrics(const std::vector<MetricsRow>& rows, TableFormat format, bool resources) {
    std::ostringstream os;
    if (format == TableFormat::KeyValue) {
        for (const auto& r : rows) {
            os << "name=" << r.name << " states=" << r.states << " transitions=" << r.transitions
               << " states_min=" << r.states_min << " transitions_min=" << r.transitions_min;
            if (resources) {
                os << " seconds=" << std::fixed << std::setprecision(3) << r.seconds << " peak_kib=" << r.peak_kib;
            }
            os << "\n";
        }
        return os.str();
    }
    std::size_t width = 4;
    for (const auto& r : rows) {
        width = std::max(width, r.name.size());
    }
    os << std::left << std::setw(static_cast<int>(width)) << "name" << std::right << std::setw(10) << "states"
       << std::setw(13) << "transitions" << std::setw(12) << "states_min" << std::setw(17) << "transitions_min";
    if (resources) {
        os << std::setw(10) << "time(s)" << std::setw(12) << "peak(KiB)";
    }
    os << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(static_cast<int>(width)) << r.name << std::right << std::setw(10) << r.states
           << std::setw(13) << r.transitions << std::setw(12) << r.states_min << std::setw(17) << r.transitions_min;
        if (resources) {
            os << std::setw(10) << std::fixed << std::setprecision(3) << r.seconds << std::setw(12) << r.peak_kib;
        }
        os << "\n";
    }
    return os.str();
}

} // namespace lpecleave
