#include "colorcache/energy.hpp"

#include <cmath>
#include <string>

#include "colorcache/error.hpp"

namespace colorcache {

void EnergyParams::validate() const {
    auto check = [](double v, const char *field) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("energy.") + field, "must be a finite non-negative number");
    };
    check(e_dyn_l2, "e_dyn_l2");
    check(p_leak_l2, "p_leak_l2");
    check(e_dyn_mem, "e_dyn_mem");
    check(p_leak_mem, "p_leak_mem");
    check(e_dyn_prof, "e_dyn_prof");
    check(p_leak_prof, "p_leak_prof");
    check(e_tran, "e_tran");
    check(area_leak_penalty, "area_leak_penalty");
}

double l2_leakage_power(const EnergyParams &p, bool area_penalty) {
    return area_penalty ? p.p_leak_l2 * (1.0 + p.area_leak_penalty) : p.p_leak_l2;
}

double e_l2(const EnergyParams &p, double hits, double misses, double time_s, double active_ratio,
            bool area_penalty) {
    return p.e_dyn_l2 * (hits + 2.0 * misses) +
           l2_leakage_power(p, area_penalty) * time_s * active_ratio;
}

double e_mem(const EnergyParams &p, double mem_accesses, double time_s) {
    return p.e_dyn_mem * mem_accesses + p.p_leak_mem * time_s;
}

double e_algo(const EnergyParams &p, double prof_accesses, double time_s, double transitions,
              bool profiling) {
    const double tran = p.e_tran * transitions;
    if (!profiling)
        return tran;
    return p.e_dyn_prof * prof_accesses + p.p_leak_prof * time_s + tran;
}

EnergyBreakdown make_breakdown(double l2, double mem, double algo, double time_s) {
    EnergyBreakdown b{l2, mem, algo, l2 + mem + algo, 0.0};
    b.edp = edp(b, time_s);
    return b;
}

double edp(const EnergyBreakdown &b, double time_s) { return b.total * time_s; }

} // namespace colorcache
