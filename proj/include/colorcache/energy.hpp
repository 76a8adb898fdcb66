#pragma once

#include <cstdint>

namespace colorcache {

// Memory sub-system energy constants, SI units. Defaults: CACTI 5.3 values
// for an 8-bank, 8-way, 2MB L2 with 64B lines and its tag-only profiler.
struct EnergyParams {
    double e_dyn_l2 = 1.086e-9;   // J per L2 access (a miss costs two)
    double p_leak_l2 = 2.016;     // W, whole L2
    double e_dyn_mem = 70e-9;     // J per memory access
    double p_leak_mem = 0.18;     // W
    double e_dyn_prof = 0.005e-9; // J per profiling-cache access
    double p_leak_prof = 0.007;   // W
    double e_tran = 0.002e-9;     // J per line power transition
    double area_leak_penalty = 0.05; // extra L2 leakage for gated-Vdd designs

    void validate() const;
};

struct EnergyBreakdown {
    double e_l2 = 0.0;
    double e_mem = 0.0;
    double e_algo = 0.0;
    double total = 0.0;
    double edp = 0.0;
};

// L2 leakage power, including the area penalty when flagged.
double l2_leakage_power(const EnergyParams &p, bool area_penalty);

double e_l2(const EnergyParams &p, double hits, double misses, double time_s, double active_ratio,
            bool area_penalty);
inline double e_l2(const EnergyParams &p, double hits, double misses, double time_s,
                   std::uint32_t active_colors, std::uint32_t colors, bool area_penalty) {
    return e_l2(p, hits, misses, time_s,
                static_cast<double>(active_colors) / static_cast<double>(colors), area_penalty);
}
double e_mem(const EnergyParams &p, double mem_accesses, double time_s);
// Pass profiling = false for techniques without a profiling cache.
double e_algo(const EnergyParams &p, double prof_accesses, double time_s, double transitions,
              bool profiling);

EnergyBreakdown make_breakdown(double l2, double mem, double algo, double time_s);
double edp(const EnergyBreakdown &b, double time_s);

} // namespace colorcache
