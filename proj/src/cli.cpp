#include "colorcache/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "colorcache/config.hpp"
#include "colorcache/error.hpp"
#include "colorcache/runner.hpp"
#include "colorcache/workload.hpp"

namespace colorcache {

namespace fs = std::filesystem;

namespace {

struct GenTraceOptions {
    std::string kind;
    std::uint64_t size = 100'000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
    SyntheticParams params;
};

struct RunOptions {
    std::vector<std::string> configs;
    std::vector<std::string> policies{"ours"};
    std::string out;
    std::string log;
    unsigned jobs = 1;
    bool quiet = false;
};

struct CompareOptions {
    std::string base;
    std::string tech;
    std::string out;
    std::string format = "table";
};

struct ReportOptions {
    std::string input;
    std::string format = "table";
    std::string out;
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + path + "'");
    f << content;
    if (!f)
        throw Error("write failed for '" + path + "'");
}

RunReport read_report(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open report '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
    return report_from_json(j);
}

std::string run_log(const RunReport &report) {
    std::string out;
    for (const IntervalRecord &rec : report.intervals)
        out += to_json(rec).dump() + '\n';
    return out;
}

int do_gen_trace(const GenTraceOptions &o, std::ostream &out) {
    SyntheticParams p = o.params;
    p.length = o.size;
    const auto records = gen_synthetic(parse_synthetic_kind(o.kind), p, o.seed);
    TraceFormat fmt = format_for_path(o.out);
    if (o.format == "text")
        fmt = TraceFormat::Text;
    else if (o.format == "binary")
        fmt = TraceFormat::Binary;
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + o.out + "'");
    write_trace(f, records, fmt);
    out << "wrote " << records.size() << " records to " << o.out << '\n';
    return 0;
}

int do_run(const RunOptions &o, std::ostream &out) {
    struct Job {
        std::string config;
        Policy policy;
        RunConfig cfg;
        RunReport report;
        std::string error;
    };
    std::vector<Job> jobs;
    for (const std::string &path : o.configs) {
        const RunConfig cfg = load_config(path);
        for (const std::string &p : o.policies)
            jobs.push_back(Job{path, parse_policy(p), cfg, {}, {}});
    }
    const bool batch = jobs.size() > 1;
    if (batch && !o.out.empty())
        fs::create_directories(o.out);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                jobs[i].report = run(jobs[i].cfg, jobs[i].policy);
            } catch (const std::exception &e) {
                jobs[i].error = e.what();
            }
        }
    };
    {
        const unsigned nthreads = std::clamp<unsigned>(o.jobs, 1, static_cast<unsigned>(jobs.size()));
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < nthreads; ++t)
            pool.emplace_back(worker);
        worker();
    }

    for (const Job &job : jobs) {
        if (!job.error.empty())
            throw Error(job.config + " [" + std::string(to_string(job.policy)) + "]: " + job.error);
        const std::string stem = fs::path(job.config).stem().string() + "." + std::string(to_string(job.policy));
        std::string report_path = o.out;
        std::string log_path = o.log;
        if (batch && !o.out.empty()) {
            report_path = (fs::path(o.out) / (stem + ".json")).string();
            log_path = (fs::path(o.out) / (stem + ".jsonl")).string();
        }
        if (!report_path.empty())
            write_file(report_path, to_json(job.report).dump(2) + '\n');
        if (!log_path.empty())
            write_file(log_path, run_log(job.report));
        if (!o.quiet) {
            out << "== " << job.config << '\n' << report_table(job.report);
            if (!report_path.empty())
                out << "report            " << report_path << '\n';
        }
    }
    return 0;
}

int do_compare(const CompareOptions &o, std::ostream &out) {
    const ComparisonReport cmp = compare(read_report(o.base), read_report(o.tech));
    const std::string text = o.format == "json" ? to_json(cmp).dump(2) + '\n' : comparison_table(cmp);
    if (!o.out.empty())
        write_file(o.out, text);
    out << text;
    return 0;
}

int do_report(const ReportOptions &o, std::ostream &out) {
    const RunReport r = read_report(o.input);
    std::string text;
    if (o.format == "csv")
        text = report_csv(r);
    else if (o.format == "json")
        text = to_json(r).dump(2) + '\n';
    else
        text = report_table(r);
    if (!o.out.empty())
        write_file(o.out, text);
    else
        out << text;
    return 0;
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"colorcache: color-partitioned LLC leakage-energy simulator"};
    app.require_subcommand(1);

    GenTraceOptions gen;
    auto *gen_cmd = app.add_subcommand("gen-trace", "write a synthetic L2 access trace");
    gen_cmd->add_option("--kind", gen.kind, "sequential | loop | random | mixed")
        ->required()
        ->check(CLI::IsMember({"sequential", "loop", "random", "mixed"}));
    gen_cmd->add_option("--size", gen.size, "number of records")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output trace file (.bin = binary)")->required();
    gen_cmd->add_option("--format", gen.format, "text | binary (default: from extension)")
        ->check(CLI::IsMember({"text", "binary"}));
    gen_cmd->add_option("--working-set", gen.params.working_set, "bytes")->capture_default_str();
    gen_cmd->add_option("--stride", gen.params.stride, "bytes")->capture_default_str();
    gen_cmd->add_option("--locality", gen.params.locality, "loop: fraction of accesses to the loop")
        ->capture_default_str();
    gen_cmd->add_option("--store-fraction", gen.params.store_fraction)->capture_default_str();
    gen_cmd->add_option("--mean-delta", gen.params.mean_delta, "instructions between L2 accesses")
        ->capture_default_str();
    gen_cmd->add_option("--phase-length", gen.params.phase_length, "mixed: records per phase")
        ->capture_default_str();

    RunOptions run_opts;
    auto *run_cmd = app.add_subcommand("run", "simulate one or more configs under one or more policies");
    run_cmd->add_option("--config", run_opts.configs, "run config file (repeatable)")->required();
    run_cmd->add_option("--policy", run_opts.policies, "baseline | dct | ours (repeatable, comma list)")
        ->delimiter(',')
        ->check(CLI::IsMember({"baseline", "dct", "ours"}))
        ->capture_default_str();
    run_cmd->add_option("--out", run_opts.out, "report file (a directory for batches)");
    run_cmd->add_option("--log", run_opts.log, "per-interval JSON-lines log");
    run_cmd->add_option("--jobs", run_opts.jobs, "parallel runs")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--quiet", run_opts.quiet, "suppress the summary table");

    CompareOptions cmp;
    auto *cmp_cmd = app.add_subcommand("compare", "energy/EDP saving and cycle increase of tech over base");
    cmp_cmd->add_option("--base", cmp.base, "baseline report")->required();
    cmp_cmd->add_option("--tech", cmp.tech, "technique report")->required();
    cmp_cmd->add_option("--out", cmp.out, "also write the comparison here");
    cmp_cmd->add_option("--format", cmp.format, "table | json")->check(CLI::IsMember({"table", "json"}));

    ReportOptions rep;
    auto *rep_cmd = app.add_subcommand("report", "render a report file");
    rep_cmd->add_option("input", rep.input, "report JSON written by run")->required();
    rep_cmd->add_option("--format", rep.format, "csv | json | table")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    rep_cmd->add_option("--out", rep.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    try {
        if (gen_cmd->parsed())
            return do_gen_trace(gen, out);
        if (run_cmd->parsed())
            return do_run(run_opts, out);
        if (cmp_cmd->parsed())
            return do_compare(cmp, out);
        return do_report(rep, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace colorcache
