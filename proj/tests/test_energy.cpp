#include "doctest.h"

#include "colorcache/energy.hpp"
#include "colorcache/error.hpp"

using namespace colorcache;

TEST_CASE("L2 energy") {
    const EnergyParams p;
    CHECK(e_l2(p, 0, 0, 1.0, 64u, 64u, false) == 2.016);
    CHECK(e_l2(p, 0, 0, 1.0, 64u, 64u, true) == doctest::Approx(2.1168).epsilon(1e-12));
    CHECK(e_l2(p, 1e6, 0, 0.0, 64u, 64u, false) == doctest::Approx(1.086e-3).epsilon(1e-12));
    CHECK(e_l2(p, 0, 1e6, 0.0, 64u, 64u, false) == doctest::Approx(2.172e-3).epsilon(1e-12));
    CHECK(e_l2(p, 0, 0, 1.0, 32u, 64u, false) == doctest::Approx(1.008));
}

TEST_CASE("memory energy") {
    const EnergyParams p;
    CHECK(e_mem(p, 0, 1.0) == 0.18);
    CHECK(e_mem(p, 1e6, 0.0) == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(e_mem(p, 0, 0.0) == 0.0);
}

TEST_CASE("algorithm overhead energy") {
    const EnergyParams p;
    CHECK(e_algo(p, 0, 0.0, 1000, true) == doctest::Approx(2e-9).epsilon(1e-12));
    // 1e9 accesses * 0.005 nJ
    CHECK(e_algo(p, 1e9, 0.0, 0, true) == doctest::Approx(5e-3).epsilon(1e-12));
    CHECK(e_algo(p, 0, 0.0, 0, true) == 0.0);
    CHECK(e_algo(p, 0, 1.0, 0, true) == doctest::Approx(0.007));
    // Without a profiling cache only transitions cost energy.
    CHECK(e_algo(p, 1e9, 1.0, 1000, false) == doctest::Approx(2e-9).epsilon(1e-12));
}

TEST_CASE("breakdown additivity and EDP") {
    const EnergyBreakdown b = make_breakdown(1.25, 0.5, 0.25, 0.5);
    CHECK(b.total == 2.0);
    CHECK(b.edp == 1.0);
    CHECK(edp(b, 0.0) == 0.0);

    // Fixed counters: leakage grows with time, so EDP grows faster than linearly.
    const EnergyParams p;
    auto total_at = [&](double t) {
        return make_breakdown(e_l2(p, 1e5, 1e4, t, 1.0, true), e_mem(p, 1e4, t), e_algo(p, 0, t, 0, true), t);
    };
    const EnergyBreakdown t1 = total_at(1.0), t2 = total_at(2.0);
    CHECK(t2.total - t1.total == doctest::Approx(t1.total - total_at(0.0).total));
    CHECK(t2.edp > 2.0 * t1.edp);
}

TEST_CASE("property: energy is monotone in every counter") {
    const EnergyParams p;
    const double base = e_l2(p, 10, 10, 0.1, 0.5, true);
    CHECK(e_l2(p, 11, 10, 0.1, 0.5, true) >= base);
    CHECK(e_l2(p, 10, 11, 0.1, 0.5, true) >= base);
    CHECK(e_l2(p, 10, 10, 0.2, 0.5, true) >= base);
    CHECK(e_l2(p, 10, 10, 0.1, 0.6, true) >= base);
    CHECK(e_mem(p, 11, 0.1) >= e_mem(p, 10, 0.1));
    CHECK(e_algo(p, 11, 0.1, 5, true) >= e_algo(p, 10, 0.1, 5, true));
    CHECK(e_algo(p, 10, 0.1, 6, true) >= e_algo(p, 10, 0.1, 5, true));
}

TEST_CASE("energy params are validated") {
    EnergyParams p;
    p.p_leak_l2 = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
