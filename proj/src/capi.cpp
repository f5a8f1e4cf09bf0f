// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/lpecleave.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpecleave/cleave.hpp"
#include "lpecleave/invariant.hpp"
#include "lpecleave/pipeline.hpp"
#include "lpecleave/spec.hpp"

using namespace lpecleave;

struct lpc_spec {
    SpecFile spec;
};

struct lpc_lts {
    Lts lts;
};

struct lpc_plan {
    std::shared_ptr<const Lpe> lpe;
    std::vector<Value> init;
    CleavePlan plan;
};

struct lpc_pipeline_result {
    PipelineResult result;
};

namespace {

thread_local std::string g_last_error;

lpc_status fail(lpc_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <class F>
lpc_status guarded(F&& f) {
    g_last_error.clear();
    try {
        return f();
    } catch (const ParseError& e) {
        return fail(LPC_ERR_PARSE, e.what());
    } catch (const MalformedAut& e) {
        return fail(LPC_ERR_PARSE, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LPC_ERR_PARSE, std::string("partition: ") + e.what());
    } catch (const PipelineError& e) {
        return fail(e.kind() == PipelineError::Kind::Limit ? LPC_ERR_LIMIT : LPC_ERR_VALIDATION, e.what());
    } catch (const Error& e) {
        return fail(LPC_ERR_VALIDATION, e.what());
    } catch (const std::exception& e) {
        return fail(LPC_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

lpc_status give(char** out, const std::string& s) {
    if (out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null output pointer");
    }
    *out = copy_string(s);
    return LPC_OK;
}

Limits to_limits(const lpc_limits* l) {
    Limits out;
    if (l != nullptr) {
        out.nat_bound = l->nat_bound;
        out.max_states = static_cast<std::size_t>(l->max_states);
        out.max_transitions = static_cast<std::size_t>(l->max_transitions);
    }
    return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> parse_partition(const char* text) {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object() || !doc.contains("V") || !doc.contains("W")) {
        throw PartitionInvalid("partition must be an object with arrays V and W");
    }
    return {doc.at("V").get<std::vector<std::string>>(), doc.at("W").get<std::vector<std::string>>()};
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        out += l + "\n";
    }
    return out;
}

std::string witness_text(const std::vector<MultiActionValue>& w) {
    std::string out;
    for (const auto& m : w) {
        out += to_string(m) + "\n";
    }
    return out;
}

} // namespace

extern "C" {

const char* lpc_last_error(void) { return g_last_error.c_str(); }

void lpc_string_free(char* s) { delete[] s; }

void lpc_limits_default(lpc_limits* limits) {
    if (limits == nullptr) {
        return;
    }
    const Limits d;
    limits->nat_bound = d.nat_bound;
    limits->max_states = d.max_states;
    limits->max_transitions = d.max_transitions;
}

void lpc_pipeline_options_default(lpc_pipeline_options* options) {
    if (options == nullptr) {
        return;
    }
    lpc_limits_default(&options->limits);
    options->invariant = nullptr;
    options->invariant_on_update = 0;
    options->no_tag = 0;
    options->force = 0;
}

lpc_status lpc_spec_parse(const char* text, lpc_spec** out) {
    if (text == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new lpc_spec{parse_spec(text)};
        return LPC_OK;
    });
}

lpc_status lpc_spec_load(const char* path, lpc_spec** out) {
    if (path == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    std::ifstream in(path);
    if (!in) {
        return fail(LPC_ERR_IO, std::string("cannot read ") + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return lpc_spec_parse(buf.str().c_str(), out);
}

void lpc_spec_free(lpc_spec* spec) { delete spec; }

const char* lpc_spec_init_name(const lpc_spec* spec) {
    return spec == nullptr ? "" : spec->spec.init.lpe->name.c_str();
}

lpc_status lpc_explore(const lpc_spec* spec, const lpc_limits* limits, lpc_lts** out) {
    if (spec == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        try {
            *out = new lpc_lts{explore_lpe(spec->spec.init, to_limits(limits))};
        } catch (const LimitExceeded& e) {
            *out = new lpc_lts{e.partial()};
            return fail(LPC_ERR_LIMIT, e.what());
        }
        return LPC_OK;
    });
}

lpc_status lpc_compose(const lpc_spec* spec, const char* composition, const lpc_limits* limits, lpc_lts** out) {
    if (spec == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const CompositionExpr* e = nullptr;
        if (composition == nullptr || *composition == '\0') {
            if (spec->spec.compositions.empty()) {
                return fail(LPC_ERR_ARGUMENT, "the specification declares no composition");
            }
            e = &spec->spec.compositions.front().second;
        } else {
            e = spec->spec.find_composition(composition);
            if (e == nullptr) {
                return fail(LPC_ERR_ARGUMENT, std::string("unknown composition '") + composition + "'");
            }
        }
        try {
            *out = new lpc_lts{explore_composition(*e, to_limits(limits))};
        } catch (const LimitExceeded& ex) {
            *out = new lpc_lts{ex.partial()};
            return fail(LPC_ERR_LIMIT, ex.what());
        }
        return LPC_OK;
    });
}

lpc_status lpc_minimise(const lpc_lts* lts, lpc_lts** out) {
    if (lts == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new lpc_lts{minimise_bisim(lts->lts).quotient};
        return LPC_OK;
    });
}

lpc_status lpc_lts_read_aut(const char* path, lpc_lts** out) {
    if (path == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    std::ifstream in(path);
    if (!in) {
        return fail(LPC_ERR_IO, std::string("cannot read ") + path);
    }
    return guarded([&] {
        *out = new lpc_lts{read_aut(in)};
        return LPC_OK;
    });
}

lpc_status lpc_lts_write_aut(const lpc_lts* lts, const char* path) {
    if (lts == nullptr || path == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    std::ofstream os(path);
    if (!os) {
        return fail(LPC_ERR_IO, std::string("cannot write ") + path);
    }
    write_aut(lts->lts, os);
    return os ? LPC_OK : fail(LPC_ERR_IO, std::string("cannot write ") + path);
}

lpc_status lpc_lts_to_aut(const lpc_lts* lts, char** out) {
    if (lts == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    std::ostringstream os;
    write_aut(lts->lts, os);
    return give(out, os.str());
}

lpc_status lpc_lts_warnings(const lpc_lts* lts, char** out) {
    if (lts == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, join_lines(lts->lts.warnings()));
}

size_t lpc_lts_num_states(const lpc_lts* lts) { return lts == nullptr ? 0 : lts->lts.num_states(); }

size_t lpc_lts_num_transitions(const lpc_lts* lts) { return lts == nullptr ? 0 : lts->lts.num_transitions(); }

void lpc_lts_free(lpc_lts* lts) { delete lts; }

lpc_status lpc_compare(const lpc_lts* a, const lpc_lts* b, int* bisimilar, char** witness) {
    if (a == nullptr || b == nullptr || bisimilar == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const BisimResult r = check_bisim(a->lts, b->lts);
        *bisimilar = r.bisimilar ? 1 : 0;
        if (witness != nullptr) {
            *witness = copy_string(witness_text(r.witness));
        }
        return LPC_OK;
    });
}

lpc_status lpc_cleave(const lpc_spec* spec, const char* partition_json, int no_tag, lpc_plan** out) {
    if (spec == nullptr || partition_json == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto [v, w] = parse_partition(partition_json);
        auto plan = std::make_unique<lpc_plan>();
        plan->lpe = spec->spec.init.lpe;
        plan->init = spec->spec.init.init;
        plan->plan = auto_cleave(*plan->lpe, v, w);
        plan->plan.no_tag = no_tag != 0;
        *out = plan.release();
        return LPC_OK;
    });
}

lpc_status lpc_plan_dump(const lpc_plan* plan, char** out) {
    if (plan == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, dump_plan(*plan->lpe, plan->plan));
}

lpc_status lpc_plan_component(const lpc_plan* plan, int side, char** out) {
    if (plan == nullptr || (side != 0 && side != 1)) {
        return fail(LPC_ERR_ARGUMENT, "invalid argument");
    }
    return guarded([&] {
        const SeparationTuple& t = plan->plan.tuple(side == 0 ? Side::V : Side::W);
        const Lpe c = induce_component(*plan->lpe, plan->plan, side == 0 ? Side::V : Side::W);
        const std::vector<Value> init = project(plan->init, t.U);
        return give(out, print_lpe(c, &init));
    });
}

lpc_status lpc_plan_oracle(const lpc_plan* plan, uint64_t nat_bound, int* passed, char** report) {
    if (plan == nullptr || passed == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const OracleReport r = check_cleave_oracle(*plan->lpe, plan->plan, nat_bound);
        *passed = r.passed() ? 1 : 0;
        if (report != nullptr) {
            *report = copy_string(to_string(r));
        }
        return LPC_OK;
    });
}

void lpc_plan_free(lpc_plan* plan) { delete plan; }

lpc_status lpc_check_invariant(const lpc_spec* spec, const char* invariant, uint64_t nat_bound, int* holds,
                               char** report) {
    if (spec == nullptr || invariant == nullptr || holds == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const Lpe& p = *spec->spec.init.lpe;
        const Expr psi = parse_expr(invariant, spec->spec, p);
        const InvariantReport r = check_invariant(p, psi, nat_bound);
        *holds = r.holds ? 1 : 0;
        if (report != nullptr) {
            std::string text = r.holds ? "invariant holds\n" : "invariant violated (" + std::to_string(r.count) + ")\n";
            for (const auto& v : r.violations) {
                text += "  " + to_string(v) + "\n";
            }
            if (r.truncated) {
                text += "note: Nat domains truncated; checked only up to the bound\n";
            }
            *report = copy_string(text);
        }
        return LPC_OK;
    });
}

lpc_status lpc_pipeline(const lpc_spec* spec, const char* partition_json, const lpc_pipeline_options* options,
                        lpc_pipeline_result** out) {
    if (spec == nullptr || partition_json == nullptr || out == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto [v, w] = parse_partition(partition_json);
        PipelineOptions opts;
        if (options != nullptr) {
            opts.limits = to_limits(&options->limits);
            if (options->invariant != nullptr) {
                opts.invariant = options->invariant;
            }
            opts.invariant_on_update = options->invariant_on_update != 0;
            opts.no_tag = options->no_tag != 0;
            opts.force = options->force != 0;
        }
        *out = new lpc_pipeline_result{run_pipeline(spec->spec, v, w, opts)};
        return LPC_OK;
    });
}

int lpc_pipeline_bisimilar(const lpc_pipeline_result* r) { return r != nullptr && r->result.bisim.bisimilar ? 1 : 0; }

int lpc_pipeline_unverified(const lpc_pipeline_result* r) { return r != nullptr && r->result.unverified ? 1 : 0; }

lpc_status lpc_pipeline_table(const lpc_pipeline_result* r, lpc_table_format format, int resources, char** out) {
    if (r == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, format_metrics(r->result.rows, format == LPC_TABLE_KV ? TableFormat::KeyValue : TableFormat::Text,
                                    resources != 0));
}

lpc_status lpc_pipeline_witness(const lpc_pipeline_result* r, char** out) {
    if (r == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, witness_text(r->result.bisim.witness));
}

lpc_status lpc_pipeline_plan(const lpc_pipeline_result* r, char** out) {
    if (r == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, r->result.plan_text);
}

lpc_status lpc_pipeline_oracle(const lpc_pipeline_result* r, char** out) {
    if (r == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, to_string(r->result.oracle));
}

lpc_status lpc_pipeline_warnings(const lpc_pipeline_result* r, char** out) {
    if (r == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    return give(out, join_lines(r->result.warnings));
}

lpc_status lpc_pipeline_write_artifacts(const lpc_pipeline_result* r, const char* dir) {
    if (r == nullptr || dir == nullptr) {
        return fail(LPC_ERR_ARGUMENT, "null argument");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        return fail(LPC_ERR_IO, std::string("cannot create ") + dir + ": " + ec.message());
    }
    for (const auto& a : r->result.artifacts) {
        const auto path = std::filesystem::path(dir) / a.file_name;
        std::ofstream os(path);
        write_aut(a.lts, os);
        if (!os) {
            return fail(LPC_ERR_IO, "cannot write " + path.string());
        }
    }
    return LPC_OK;
}

void lpc_pipeline_result_free(lpc_pipeline_result* r) { delete r; }

} // extern "C"
