#include "colorcache/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "colorcache/error.hpp"

namespace colorcache {

namespace pt = boost::property_tree;

namespace {

// The INI reader only knows whole-line comments; drop `; ...` and `# ...`
// tails that follow whitespace.
std::string strip_inline_comments(std::istream &in) {
    std::string out, line;
    while (std::getline(in, line)) {
        for (std::size_t i = 1; i < line.size(); ++i)
            if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.resize(i);
                break;
            }
        out += line;
        out += '\n';
    }
    return out;
}

class Section {
  public:
    Section(const pt::ptree *tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    bool has(const std::string &key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::string path(const std::string &key) const { return name_ + "." + key; }

    std::string get_string(const std::string &key, const std::string &def) const {
        if (!has(key))
            return def;
        return tree_->get<std::string>(key);
    }

    double get_double(const std::string &key, double def) const {
        if (!has(key))
            return def;
        const std::string raw = tree_->get<std::string>(key);
        if (raw == "inf" || raw == "infinity")
            return std::numeric_limits<double>::infinity();
        try {
            std::size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size())
                throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception &) {
            throw ConfigError(path(key), "expected a number, got '" + raw + "'");
        }
    }

    std::uint64_t get_count(const std::string &key, std::uint64_t def) const {
        if (!has(key))
            return def;
        const double v = get_double(key, 0.0);
        if (!(v >= 0.0) || v > 1.8e19 || std::floor(v) != v)
            throw ConfigError(path(key), "expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    std::uint32_t get_u32(const std::string &key, std::uint32_t def) const {
        const std::uint64_t v = get_count(key, def);
        if (v > 0xffffffffull)
            throw ConfigError(path(key), "value too large");
        return static_cast<std::uint32_t>(v);
    }

    bool get_bool(const std::string &key, bool def) const {
        if (!has(key))
            return def;
        const std::string raw = tree_->get<std::string>(key);
        if (raw == "true" || raw == "1" || raw == "yes")
            return true;
        if (raw == "false" || raw == "0" || raw == "no")
            return false;
        throw ConfigError(path(key), "expected true or false");
    }

    void reject_unknown(std::initializer_list<const char *> known) const {
        if (!tree_)
            return;
        std::set<std::string> allowed(known.begin(), known.end());
        for (const auto &[key, _] : *tree_)
            if (!allowed.count(key))
                throw ConfigError(path(key), "unknown key");
    }

  private:
    const pt::ptree *tree_;
    std::string name_;
};

Section section(const pt::ptree &root, const std::string &name) {
    auto it = root.find(name);
    return Section(it == root.not_found() ? nullptr : &it->second, name);
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

TaskConfig parse_task(const Section &s, std::string name, const TaskConfig &def) {
    s.reject_unknown({"name", "trace", "kind", "length", "working_set", "stride", "locality",
                      "store_fraction", "mean_delta", "phase_length", "base", "seed", "budget"});
    TaskConfig t = def;
    t.name = s.get_string("name", name);
    if (s.has("trace"))
        t.trace_path = s.get_string("trace", "");
    try {
        t.kind = parse_synthetic_kind(s.get_string("kind", std::string(to_string(def.kind))));
    } catch (const ConfigError &e) {
        throw ConfigError(s.path("kind"), e.what());
    }
    if (s.has("length"))
        t.length = s.get_count("length", 0);
    t.params.working_set = s.get_count("working_set", def.params.working_set);
    t.params.stride = s.get_count("stride", def.params.stride);
    t.params.locality = s.get_double("locality", def.params.locality);
    t.params.store_fraction = s.get_double("store_fraction", def.params.store_fraction);
    t.params.mean_delta = s.get_u32("mean_delta", def.params.mean_delta);
    t.params.phase_length = s.get_count("phase_length", def.params.phase_length);
    t.params.base = s.get_count("base", def.params.base);
    t.seed = s.get_count("seed", def.seed);
    t.budget = s.get_count("budget", def.budget);
    return t;
}

} // namespace

std::uint64_t RunConfig::scaled(std::uint64_t v) const {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(static_cast<double>(v) * workload.scale)));
}

std::vector<std::uint64_t> RunConfig::budgets() const {
    std::vector<std::uint64_t> out;
    for (const TaskConfig &t : workload.tasks)
        out.push_back(scaled(t.budget));
    return out;
}

Schedule RunConfig::make_schedule() const {
    if (workload.pattern == "preemptive")
        return Schedule::preemptive(budgets(), scaled(workload.p1), scaled(workload.p2));
    return Schedule::sequential(budgets());
}

void RunConfig::validate() const {
    timing.validate();
    energy.validate();
    controller.validate(geometry.colors());
    if (controller.sampling_ratio == 0 || geometry.sets_per_color() % controller.sampling_ratio != 0)
        throw ConfigError("controller.sampling_ratio",
                          "must divide sets_per_color (" + std::to_string(geometry.sets_per_color()) + ")");
    dct.validate();
    if (initial_colors != 0 &&
        (initial_colors < controller.resolved_min(geometry.colors()) || initial_colors > geometry.colors()))
        throw ConfigError("controller.initial_colors", "outside [min_colors, colors]");
    if (!(workload.scale > 0.0) || !std::isfinite(workload.scale))
        throw ConfigError("workload.scale", "must be positive");
    if (workload.tasks.empty())
        throw ConfigError("workload", "at least one [taskN] section is required");
    if (workload.pattern != "preemptive" && workload.pattern != "sequential")
        throw ConfigError("workload.pattern", "must be preemptive or sequential");
    for (std::size_t i = 0; i < workload.tasks.size(); ++i) {
        const TaskConfig &t = workload.tasks[i];
        const std::string where = "task" + std::to_string(i + 1);
        if (t.budget == 0)
            throw ConfigError(where + ".budget", "must be positive");
        if (!t.trace_path) {
            SyntheticParams p = t.params;
            if (t.length)
                p.length = *t.length;
            try {
                p.validate();
            } catch (const ConfigError &e) {
                throw ConfigError(where + "." + e.field(), e.what());
            }
        }
    }
    make_schedule();
}

std::string RunConfig::fingerprint() const {
    std::ostringstream os;
    os << "geometry=" << geometry.sets() << 'x' << geometry.ways() << 'x' << geometry.block_size() << '/'
       << geometry.page_size() << ";scale=" << fmt_double(workload.scale) << ";pattern=" << workload.pattern
       << ";p1=" << workload.p1 << ";p2=" << workload.p2;
    for (const TaskConfig &t : workload.tasks) {
        os << ";task=" << t.name << ',' << t.budget << ',';
        if (t.trace_path) {
            os << "trace:" << *t.trace_path;
        } else {
            os << to_string(t.kind) << ",ws=" << t.params.working_set << ",stride=" << t.params.stride
               << ",loc=" << fmt_double(t.params.locality) << ",st=" << fmt_double(t.params.store_fraction)
               << ",delta=" << t.params.mean_delta << ",phase=" << t.params.phase_length
               << ",base=" << t.params.base << ",seed=" << t.seed << ",len=";
            if (t.length)
                os << *t.length;
            else
                os << "unbounded";
        }
    }
    return os.str();
}

RunConfig default_config() {
    RunConfig cfg;
    TaskConfig small;
    small.name = "loop-512k";
    small.kind = SyntheticKind::Loop;
    small.params.working_set = 512 * 1024;
    small.seed = 1;
    TaskConfig stream;
    stream.name = "stream";
    stream.kind = SyntheticKind::Sequential;
    stream.params.working_set = 1ull << 36;
    stream.seed = 2;
    TaskConfig mixed;
    mixed.name = "mixed-1536k";
    mixed.kind = SyntheticKind::Mixed;
    mixed.params.working_set = 1536 * 1024;
    mixed.params.phase_length = 40'000;
    mixed.seed = 3;
    cfg.workload.tasks = {small, stream, mixed};
    return cfg;
}

RunConfig parse_config(std::istream &in, const std::string &base_dir) {
    pt::ptree root;
    try {
        std::istringstream text(strip_inline_comments(in));
        pt::read_ini(text, root);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError("config", e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    static const std::set<std::string> kSections = {"geometry", "timing", "energy", "controller", "dct", "workload"};
    std::map<std::uint32_t, const pt::ptree *> task_sections;
    for (const auto &[name, child] : root) {
        if (kSections.count(name))
            continue;
        if (name.starts_with("task") && name.size() > 4 &&
            std::all_of(name.begin() + 4, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            task_sections[static_cast<std::uint32_t>(std::stoul(name.substr(4)))] = &child;
            continue;
        }
        throw ConfigError(name, "unknown section");
    }

    RunConfig cfg;
    cfg.base_dir = base_dir;

    const Section g = section(root, "geometry");
    g.reject_unknown({"sets", "ways", "block_size", "tag_bits", "page_size"});
    const CacheGeometry d = cfg.geometry;
    cfg.geometry = CacheGeometry(g.get_u32("sets", d.sets()), g.get_u32("ways", d.ways()),
                                 g.get_u32("block_size", d.block_size()), g.get_u32("tag_bits", d.tag_bits()),
                                 g.get_u32("page_size", d.page_size()));

    const Section t = section(root, "timing");
    t.reject_unknown({"base_cpi", "hit_latency", "mem_penalty", "overlap", "clock_hz"});
    cfg.timing.base_cpi = t.get_double("base_cpi", cfg.timing.base_cpi);
    cfg.timing.hit_latency = t.get_u32("hit_latency", cfg.timing.hit_latency);
    cfg.timing.mem_penalty = t.get_u32("mem_penalty", cfg.timing.mem_penalty);
    cfg.timing.overlap = t.get_double("overlap", cfg.timing.overlap);
    cfg.timing.clock_hz = t.get_double("clock_hz", cfg.timing.clock_hz);

    const Section e = section(root, "energy");
    e.reject_unknown({"e_dyn_l2", "p_leak_l2", "e_dyn_mem", "p_leak_mem", "e_dyn_prof", "p_leak_prof", "e_tran",
                      "area_leak_penalty"});
    EnergyParams &ep = cfg.energy;
    ep.e_dyn_l2 = e.get_double("e_dyn_l2", ep.e_dyn_l2);
    ep.p_leak_l2 = e.get_double("p_leak_l2", ep.p_leak_l2);
    ep.e_dyn_mem = e.get_double("e_dyn_mem", ep.e_dyn_mem);
    ep.p_leak_mem = e.get_double("p_leak_mem", ep.p_leak_mem);
    ep.e_dyn_prof = e.get_double("e_dyn_prof", ep.e_dyn_prof);
    ep.p_leak_prof = e.get_double("p_leak_prof", ep.p_leak_prof);
    ep.e_tran = e.get_double("e_tran", ep.e_tran);
    ep.area_leak_penalty = e.get_double("area_leak_penalty", ep.area_leak_penalty);

    const Section c = section(root, "controller");
    c.reject_unknown({"interval_length", "max_candidates", "min_colors", "granularity", "lambda", "favored_side",
                      "other_side", "sampling_ratio", "initial_colors", "charge_flush_writebacks"});
    ControllerConfig &cc = cfg.controller;
    cc.interval_length = c.get_count("interval_length", cc.interval_length);
    cc.max_candidates = c.get_u32("max_candidates", cc.max_candidates);
    cc.min_colors = c.get_u32("min_colors", cc.min_colors);
    cc.granularity = c.get_u32("granularity", cc.granularity);
    cc.lambda = c.get_double("lambda", cc.lambda);
    cc.favored_side = c.get_u32("favored_side", cc.favored_side);
    cc.other_side = c.get_u32("other_side", cc.other_side);
    cc.sampling_ratio = c.get_u32("sampling_ratio", cc.sampling_ratio);
    cfg.initial_colors = c.get_u32("initial_colors", cfg.initial_colors);
    cfg.charge_flush_writebacks = c.get_bool("charge_flush_writebacks", cfg.charge_flush_writebacks);

    const Section dc = section(root, "dct");
    dc.reject_unknown({"decay_interval", "sweep_period"});
    cfg.dct.decay_interval = dc.get_double("decay_interval", cfg.dct.decay_interval);
    cfg.dct.sweep_period = dc.get_double("sweep_period", cfg.dct.sweep_period);

    const Section w = section(root, "workload");
    w.reject_unknown({"scale", "pattern", "p1", "p2"});
    cfg.workload.scale = w.get_double("scale", cfg.workload.scale);
    cfg.workload.pattern = w.get_string("pattern", cfg.workload.pattern);
    cfg.workload.p1 = w.get_count("p1", cfg.workload.p1);
    cfg.workload.p2 = w.get_count("p2", cfg.workload.p2);

    if (task_sections.empty()) {
        cfg.workload.tasks = default_config().workload.tasks;
    } else {
        for (const auto &[index, tree] : task_sections) {
            const std::string name = "task" + std::to_string(index);
            cfg.workload.tasks.push_back(parse_task(Section(tree, name), name, TaskConfig{}));
        }
    }
    if (cfg.workload.tasks.size() != 3 && !w.has("pattern"))
        cfg.workload.pattern = "sequential";

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(in, dir.empty() ? std::string(".") : dir.string());
}

} // namespace colorcache
