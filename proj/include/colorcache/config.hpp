#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "colorcache/controller.hpp"
#include "colorcache/decay.hpp"
#include "colorcache/energy.hpp"
#include "colorcache/geometry.hpp"
#include "colorcache/timing.hpp"
#include "colorcache/workload.hpp"

namespace colorcache {

struct TaskConfig {
    std::string name;
    std::optional<std::string> trace_path; // replaces the generator when set
    SyntheticKind kind = SyntheticKind::Loop;
    SyntheticParams params;
    std::optional<std::uint64_t> length;   // records; unbounded generator when absent
    std::uint64_t seed = 1;
    std::uint64_t budget = 300'000'000;    // instructions, before scaling
};

struct WorkloadConfig {
    double scale = 0.1; // applied to budgets, preemption points and interval length
    std::string pattern = "preemptive"; // preemptive | sequential
    std::uint64_t p1 = 80'000'000;
    std::uint64_t p2 = 130'000'000;
    std::vector<TaskConfig> tasks;
};

struct RunConfig {
    CacheGeometry geometry = CacheGeometry::default_l2();
    TimingParams timing;
    EnergyParams energy;
    ControllerConfig controller;
    std::uint32_t initial_colors = 0; // 0 = all colors
    bool charge_flush_writebacks = true;
    DecayConfig dct;
    WorkloadConfig workload;
    std::string base_dir = "."; // relative trace paths resolve here

    std::uint64_t scaled(std::uint64_t v) const;
    std::vector<std::uint64_t> budgets() const;
    std::uint64_t interval_length() const { return scaled(controller.interval_length); }
    Schedule make_schedule() const;
    // Identifies geometry plus workload; equal fingerprints are comparable runs.
    std::string fingerprint() const;
    void validate() const;
};

// Three synthetic tasks with low, medium and high cache sensitivity.
RunConfig default_config();

// INI-style sections [geometry] [timing] [energy] [controller] [dct]
// [workload] [task1..taskN]. Unknown keys are rejected with their path.
RunConfig parse_config(std::istream &in, const std::string &base_dir = ".");
RunConfig load_config(const std::string &path);

} // namespace colorcache
