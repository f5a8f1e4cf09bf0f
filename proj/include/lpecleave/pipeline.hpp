// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Compositional minimisation end to end: cleave, explore and minimise the
// components, compose, and compare against the monolithic state space.

#include <optional>
#include <string>
#include <vector>

#include "lpecleave/cleave.hpp"
#include "lpecleave/invariant.hpp"
#include "lpecleave/lts.hpp"
#include "lpecleave/spec.hpp"

namespace lpecleave {

struct PipelineOptions {
    Limits limits;
    /// Invariant in expression syntax over the parameters, if any.
    std::optional<std::string> invariant;
    bool invariant_on_update = false;
    bool no_tag = false;
    /// Continue past a failing oracle or invariant check.
    bool force = false;
};

struct MetricsRow {
    std::string name;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t states_min = 0;
    std::size_t transitions_min = 0;
    double seconds = 0;
    /// Peak resident set size after the stage, in KiB.
    long peak_kib = 0;
};

/// Raised when a stage fails; `stage` names it.
class PipelineError : public Error {
  public:
    enum class Kind { Validation, Limit };

    PipelineError(std::string stage, Kind kind, const std::string& message)
        : Error(stage + ": " + message), stage_(std::move(stage)), kind_(kind) {}
    const std::string& stage() const { return stage_; }
    Kind kind() const { return kind_; }

  private:
    std::string stage_;
    Kind kind_;
};

struct Artifact {
    std::string file_name;
    Lts lts;
};

struct PipelineResult {
    CleavePlan plan;
    std::string plan_text;
    OracleReport oracle;
    std::optional<InvariantReport> invariant;
    std::vector<MetricsRow> rows;
    BisimResult bisim;
    /// Set when --force skipped a failed check.
    bool unverified = false;
    std::vector<std::string> warnings;
    std::vector<Artifact> artifacts;
};

/// Runs the pipeline on the initial process of `spec`. Throws PipelineError.
PipelineResult run_pipeline(const SpecFile& spec, const std::vector<std::string>& v_names,
                            const std::vector<std::string>& w_names, const PipelineOptions& options);

enum class TableFormat { Text, KeyValue };

/// Renders rows; `resources` adds the time and memory columns.
std::string format_metrics(const std::vector<MetricsRow>& rows, TableFormat format, bool resources = true);

/// Peak resident set size of this process in KiB.
long peak_memory_kib();

} // namespace lpecleave
