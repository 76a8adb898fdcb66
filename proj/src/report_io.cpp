#include <cstdio>
#include <sstream>

#include "colorcache/error.hpp"
#include "colorcache/runner.hpp"

namespace colorcache {

using nlohmann::json;

namespace {

json stats_json(const IntervalStats &s) {
    return json{{"instructions", s.instructions},
                {"base_cycles", s.base_cycles},
                {"stall_cycles", s.stall_cycles},
                {"total_cycles", s.total_cycles()},
                {"l2_accesses", s.l2_accesses},
                {"l2_hits", s.l2_hits},
                {"l2_misses", s.l2_misses},
                {"load_misses", s.load_misses},
                {"writebacks", s.writebacks},
                {"flush_writebacks", s.flush_writebacks},
                {"mem_accesses", s.mem_accesses},
                {"prof_accesses", s.prof_accesses},
                {"transitions", s.transitions}};
}

IntervalStats stats_from(const json &j) {
    IntervalStats s;
    s.instructions = j.at("instructions").get<std::uint64_t>();
    s.base_cycles = j.at("base_cycles").get<std::uint64_t>();
    s.stall_cycles = j.at("stall_cycles").get<std::uint64_t>();
    s.l2_accesses = j.at("l2_accesses").get<std::uint64_t>();
    s.l2_hits = j.at("l2_hits").get<std::uint64_t>();
    s.l2_misses = j.at("l2_misses").get<std::uint64_t>();
    s.load_misses = j.at("load_misses").get<std::uint64_t>();
    s.writebacks = j.at("writebacks").get<std::uint64_t>();
    s.flush_writebacks = j.at("flush_writebacks").get<std::uint64_t>();
    s.mem_accesses = j.at("mem_accesses").get<std::uint64_t>();
    s.prof_accesses = j.at("prof_accesses").get<std::uint64_t>();
    s.transitions = j.at("transitions").get<std::uint64_t>();
    return s;
}

json energy_json(const EnergyBreakdown &e) {
    return json{{"e_l2", e.e_l2}, {"e_mem", e.e_mem}, {"e_algo", e.e_algo}, {"total", e.total}, {"edp", e.edp}};
}

EnergyBreakdown energy_from(const json &j) {
    EnergyBreakdown e;
    e.e_l2 = j.at("e_l2").get<double>();
    e.e_mem = j.at("e_mem").get<double>();
    e.e_algo = j.at("e_algo").get<double>();
    e.total = j.at("total").get<double>();
    e.edp = j.at("edp").get<double>();
    return e;
}

json params_json(const EnergyParams &p) {
    return json{{"e_dyn_l2", p.e_dyn_l2},   {"p_leak_l2", p.p_leak_l2},     {"e_dyn_mem", p.e_dyn_mem},
                {"p_leak_mem", p.p_leak_mem}, {"e_dyn_prof", p.e_dyn_prof}, {"p_leak_prof", p.p_leak_prof},
                {"e_tran", p.e_tran},       {"area_leak_penalty", p.area_leak_penalty}};
}

EnergyParams params_from(const json &j) {
    EnergyParams p;
    p.e_dyn_l2 = j.at("e_dyn_l2").get<double>();
    p.p_leak_l2 = j.at("p_leak_l2").get<double>();
    p.e_dyn_mem = j.at("e_dyn_mem").get<double>();
    p.p_leak_mem = j.at("p_leak_mem").get<double>();
    p.e_dyn_prof = j.at("e_dyn_prof").get<double>();
    p.p_leak_prof = j.at("p_leak_prof").get<double>();
    p.e_tran = j.at("e_tran").get<double>();
    p.area_leak_penalty = j.at("area_leak_penalty").get<double>();
    return p;
}

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

json to_json(const IntervalRecord &r) {
    json j{{"index", r.index},
           {"task", r.task},
           {"reason", r.reason},
           {"stats", stats_json(r.stats)},
           {"active_colors", r.active_colors},
           {"active_ratio", r.active_ratio},
           {"flushed_lines", r.flushed_lines},
           {"time_s", r.time_s},
           {"energy", energy_json(r.energy)}};
    if (r.decision) {
        json cands = json::array();
        for (const CandidateSummary &c : r.decision->candidates)
            cands.push_back({{"colors", c.colors},
                             {"est_load_misses", c.est_load_misses},
                             {"est_total_misses", c.est_total_misses},
                             {"est_cycles", c.est_cycles},
                             {"est_energy", c.est_energy}});
        j["decision"] = {
            {"marginal_gain", r.decision->marginal_gain}, {"chosen", r.decision->chosen}, {"candidates", cands}};
    } else {
        j["decision"] = nullptr;
    }
    return j;
}

json to_json(const RunReport &r) {
    const RunTotals &t = r.totals;
    json intervals = json::array();
    for (const IntervalRecord &rec : r.intervals)
        intervals.push_back(to_json(rec));
    return json{
        {"format", "colorcache-report/1"},
        {"policy", r.policy},
        {"fingerprint", r.fingerprint},
        {"geometry",
         {{"sets", r.geometry.sets()},
          {"ways", r.geometry.ways()},
          {"block_size", r.geometry.block_size()},
          {"tag_bits", r.geometry.tag_bits()},
          {"page_size", r.geometry.page_size()},
          {"colors", r.geometry.colors()}}},
        {"energy_params", params_json(r.energy_params)},
        {"clock_hz", r.clock_hz},
        {"area_penalty", r.area_penalty},
        {"profiling", r.profiling},
        {"interval_length", r.interval_length},
        {"task_instructions", r.task_instructions},
        {"task_switches", r.task_switches},
        {"final_colors", r.final_colors},
        {"totals",
         {{"instructions", t.instructions},
          {"cycles", t.cycles},
          {"time_s", t.time_s},
          {"l2_accesses", t.l2_accesses},
          {"l2_hits", t.l2_hits},
          {"l2_misses", t.l2_misses},
          {"load_misses", t.load_misses},
          {"writebacks", t.writebacks},
          {"flush_writebacks", t.flush_writebacks},
          {"mem_accesses", t.mem_accesses},
          {"prof_accesses", t.prof_accesses},
          {"transitions", t.transitions},
          {"flushed_lines", t.flushed_lines},
          {"energy", energy_json(t.energy)}}},
        {"intervals", intervals}};
}

json to_json(const ComparisonReport &c) {
    return json{{"base_policy", c.base_policy},       {"tech_policy", c.tech_policy},
                {"base_energy", c.base_energy},       {"tech_energy", c.tech_energy},
                {"base_edp", c.base_edp},             {"tech_edp", c.tech_edp},
                {"base_cycles", c.base_cycles},       {"tech_cycles", c.tech_cycles},
                {"energy_saving_pct", c.energy_saving_pct}, {"edp_saving_pct", c.edp_saving_pct},
                {"cycle_increase_pct", c.cycle_increase_pct}};
}

RunReport report_from_json(const json &j) {
    try {
        if (j.value("format", "") != "colorcache-report/1")
            throw Error("not a colorcache report (missing format tag)");
        RunReport r;
        r.policy = j.at("policy").get<std::string>();
        r.fingerprint = j.at("fingerprint").get<std::string>();
        const json &g = j.at("geometry");
        r.geometry = CacheGeometry(g.at("sets").get<std::uint32_t>(), g.at("ways").get<std::uint32_t>(),
                                   g.at("block_size").get<std::uint32_t>(), g.at("tag_bits").get<std::uint32_t>(),
                                   g.at("page_size").get<std::uint32_t>());
        r.energy_params = params_from(j.at("energy_params"));
        r.clock_hz = j.at("clock_hz").get<double>();
        r.area_penalty = j.at("area_penalty").get<bool>();
        r.profiling = j.at("profiling").get<bool>();
        r.interval_length = j.at("interval_length").get<std::uint64_t>();
        r.task_instructions = j.at("task_instructions").get<std::vector<std::uint64_t>>();
        r.task_switches = j.at("task_switches").get<std::size_t>();
        r.final_colors = j.at("final_colors").get<std::uint32_t>();
        const json &t = j.at("totals");
        RunTotals &rt = r.totals;
        rt.instructions = t.at("instructions").get<std::uint64_t>();
        rt.cycles = t.at("cycles").get<std::uint64_t>();
        rt.time_s = t.at("time_s").get<double>();
        rt.l2_accesses = t.at("l2_accesses").get<std::uint64_t>();
        rt.l2_hits = t.at("l2_hits").get<std::uint64_t>();
        rt.l2_misses = t.at("l2_misses").get<std::uint64_t>();
        rt.load_misses = t.at("load_misses").get<std::uint64_t>();
        rt.writebacks = t.at("writebacks").get<std::uint64_t>();
        rt.flush_writebacks = t.at("flush_writebacks").get<std::uint64_t>();
        rt.mem_accesses = t.at("mem_accesses").get<std::uint64_t>();
        rt.prof_accesses = t.at("prof_accesses").get<std::uint64_t>();
        rt.transitions = t.at("transitions").get<std::uint64_t>();
        rt.flushed_lines = t.at("flushed_lines").get<std::uint64_t>();
        rt.energy = energy_from(t.at("energy"));
        for (const json &ij : j.at("intervals")) {
            IntervalRecord rec;
            rec.index = ij.at("index").get<std::size_t>();
            rec.task = ij.at("task").get<std::uint32_t>();
            rec.reason = ij.at("reason").get<std::string>();
            rec.stats = stats_from(ij.at("stats"));
            rec.active_colors = ij.at("active_colors").get<std::uint32_t>();
            rec.active_ratio = ij.at("active_ratio").get<double>();
            rec.flushed_lines = ij.at("flushed_lines").get<std::uint64_t>();
            rec.time_s = ij.at("time_s").get<double>();
            rec.energy = energy_from(ij.at("energy"));
            const json &dj = ij.at("decision");
            if (!dj.is_null()) {
                DecisionSummary d;
                d.marginal_gain = dj.at("marginal_gain").get<double>();
                d.chosen = dj.at("chosen").get<std::uint32_t>();
                for (const json &cj : dj.at("candidates"))
                    d.candidates.push_back({cj.at("colors").get<std::uint32_t>(), cj.at("est_load_misses").get<double>(),
                                            cj.at("est_total_misses").get<double>(), cj.at("est_cycles").get<double>(),
                                            cj.at("est_energy").get<double>()});
                rec.decision = std::move(d);
            }
            r.intervals.push_back(std::move(rec));
        }
        return r;
    } catch (const json::exception &e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
}

std::string report_csv(const RunReport &r) {
    std::ostringstream os;
    os << "index,task,reason,instructions,base_cycles,stall_cycles,total_cycles,l2_accesses,l2_hits,l2_misses,"
          "load_misses,writebacks,flush_writebacks,mem_accesses,prof_accesses,transitions,active_colors,"
          "active_ratio,flushed_lines,time_s,e_l2,e_mem,e_algo,e_total,marginal_gain,chosen_colors\n";
    for (const IntervalRecord &rec : r.intervals) {
        const IntervalStats &s = rec.stats;
        os << rec.index << ',' << rec.task << ',' << rec.reason << ',' << s.instructions << ',' << s.base_cycles << ','
           << s.stall_cycles << ',' << s.total_cycles() << ',' << s.l2_accesses << ',' << s.l2_hits << ','
           << s.l2_misses << ',' << s.load_misses << ',' << s.writebacks << ',' << s.flush_writebacks << ','
           << s.mem_accesses << ',' << s.prof_accesses << ',' << s.transitions << ',' << rec.active_colors << ','
           << fmt("%.17g", rec.active_ratio) << ',' << rec.flushed_lines << ',' << fmt("%.17g", rec.time_s) << ','
           << fmt("%.17g", rec.energy.e_l2) << ',' << fmt("%.17g", rec.energy.e_mem) << ','
           << fmt("%.17g", rec.energy.e_algo) << ',' << fmt("%.17g", rec.energy.total) << ',';
        if (rec.decision)
            os << fmt("%.17g", rec.decision->marginal_gain) << ',' << rec.decision->chosen;
        else
            os << ',';
        os << '\n';
    }
    return os.str();
}

std::string report_table(const RunReport &r) {
    const RunTotals &t = r.totals;
    std::ostringstream os;
    os << "policy            " << r.policy << '\n'
       << "intervals         " << r.intervals.size() << " (length " << r.interval_length << " instr/task)\n"
       << "task switches     " << r.task_switches << '\n'
       << "instructions      " << t.instructions << '\n'
       << "cycles            " << t.cycles << '\n'
       << "time              " << fmt("%.6f s", t.time_s) << '\n'
       << "L2 hits/misses    " << t.l2_hits << " / " << t.l2_misses << '\n'
       << "memory accesses   " << t.mem_accesses << '\n'
       << "transitions (Q)   " << t.transitions << '\n'
       << "flushed lines     " << t.flushed_lines << '\n'
       << "final colors      " << r.final_colors << " of " << r.geometry.colors() << '\n'
       << "E_L2              " << fmt("%.6e J", t.energy.e_l2) << '\n'
       << "E_mem             " << fmt("%.6e J", t.energy.e_mem) << '\n'
       << "E_algo            " << fmt("%.6e J", t.energy.e_algo) << '\n'
       << "energy            " << fmt("%.6e J", t.energy.total) << '\n'
       << "EDP               " << fmt("%.6e J*s", t.energy.edp) << '\n';
    return os.str();
}

std::string comparison_table(const ComparisonReport &c) {
    std::ostringstream os;
    os << "                  " << c.base_policy << " -> " << c.tech_policy << '\n'
       << "energy            " << fmt("%.6e J", c.base_energy) << " -> " << fmt("%.6e J", c.tech_energy) << '\n'
       << "EDP               " << fmt("%.6e", c.base_edp) << " -> " << fmt("%.6e", c.tech_edp) << '\n'
       << "cycles            " << c.base_cycles << " -> " << c.tech_cycles << '\n'
       << "energy saving     " << fmt("%.2f %%", c.energy_saving_pct) << '\n'
       << "EDP saving        " << fmt("%.2f %%", c.edp_saving_pct) << '\n'
       << "cycle increase    " << fmt("%.2f %%", c.cycle_increase_pct) << '\n';
    return os.str();
}

} // namespace colorcache
