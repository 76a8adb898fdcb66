#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "colorcache/config.hpp"
#include "colorcache/energy.hpp"
#include "colorcache/geometry.hpp"
#include "colorcache/timing.hpp"

namespace colorcache {

enum class Policy { Baseline, Dct, Ours };

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy policy);

struct CandidateSummary {
    std::uint32_t colors = 0;
    double est_load_misses = 0.0;
    double est_total_misses = 0.0;
    double est_cycles = 0.0;
    double est_energy = 0.0;
};

struct DecisionSummary {
    double marginal_gain = 0.0;
    std::vector<CandidateSummary> candidates;
    std::uint32_t chosen = 0;
};

// One closed interval. reason: "interval" (length reached; the controller
// runs), "switch" (task preempted or finished), "end" (run finished).
struct IntervalRecord {
    std::size_t index = 0;
    std::uint32_t task = 0;
    std::string reason;
    IntervalStats stats;
    std::uint32_t active_colors = 0;
    double active_ratio = 1.0;
    std::uint64_t flushed_lines = 0;
    double time_s = 0.0;
    EnergyBreakdown energy;
    std::optional<DecisionSummary> decision;
};

struct RunTotals {
    std::uint64_t instructions = 0;
    std::uint64_t cycles = 0;
    double time_s = 0.0;
    std::uint64_t l2_accesses = 0;
    std::uint64_t l2_hits = 0;
    std::uint64_t l2_misses = 0;
    std::uint64_t load_misses = 0;
    std::uint64_t writebacks = 0;
    std::uint64_t flush_writebacks = 0;
    std::uint64_t mem_accesses = 0;
    std::uint64_t prof_accesses = 0;
    std::uint64_t transitions = 0;
    std::uint64_t flushed_lines = 0;
    EnergyBreakdown energy;
};

struct RunReport {
    std::string policy;
    std::string fingerprint;
    CacheGeometry geometry = CacheGeometry::default_l2();
    EnergyParams energy_params;
    double clock_hz = 1.5e9;
    bool area_penalty = false;
    bool profiling = false;
    std::uint64_t interval_length = 0;
    std::vector<std::uint64_t> task_instructions;
    std::size_t task_switches = 0;
    std::uint32_t final_colors = 0;
    std::vector<IntervalRecord> intervals;
    RunTotals totals;
};

// Deterministic given the config (including seeds). Throws Error subclasses.
RunReport run(const RunConfig &cfg, Policy policy);

struct ComparisonReport {
    std::string base_policy;
    std::string tech_policy;
    double base_energy = 0.0;
    double tech_energy = 0.0;
    double base_edp = 0.0;
    double tech_edp = 0.0;
    std::uint64_t base_cycles = 0;
    std::uint64_t tech_cycles = 0;
    double energy_saving_pct = 0.0;
    double edp_saving_pct = 0.0;
    double cycle_increase_pct = 0.0;
};

// Throws Error when the two reports do not share geometry and workload.
ComparisonReport compare(const RunReport &base, const RunReport &tech);

nlohmann::json to_json(const IntervalRecord &rec);
nlohmann::json to_json(const RunReport &report);
nlohmann::json to_json(const ComparisonReport &cmp);
RunReport report_from_json(const nlohmann::json &j);

// Stable CSV: one header row, one row per interval.
std::string report_csv(const RunReport &report);
std::string report_table(const RunReport &report);
std::string comparison_table(const ComparisonReport &cmp);

} // namespace colorcache
