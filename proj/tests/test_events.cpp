#include <doctest.h>

#include <cmath>
#include <vector>

#include "armlab/estimator.hpp"
#include "armlab/events.hpp"

using namespace armlab;

namespace {

DriverConfig base_cfg(double kappa, std::uint64_t seed) {
    DriverConfig c;
    c.kappa = kappa;
    c.seed = seed;
    return c;
}

EventSpec spec_of(EventVariant v, int n, double eps, double x, double y, double kappa) {
    EventSpec s;
    s.variant = v;
    s.n = n;
    s.epsilon = eps;
    s.x = x;
    s.y = y;
    s.kappa = kappa;
    return s;
}

}  // namespace

TEST_CASE("leg layout per variant") {
    auto legs = spec_of(EventVariant::H_odd, 2, 0.1, 1, 0, 6).legs();
    REQUIRE(legs.size() == 3);
    CHECK(legs[0] == LegKind::ball);
    CHECK(legs[1] == LegKind::line);
    CHECK(legs[2] == LegKind::ball);

    legs = spec_of(EventVariant::Hhat_even, 2, 0.1, 1, 0, 6).legs();
    REQUIRE(legs.size() == 4);
    CHECK(legs.front() == LegKind::ball);
    CHECK(legs.back() == LegKind::line);

    legs = spec_of(EventVariant::H_even, 1, 0.1, 1, -1, 6).legs();
    REQUIRE(legs.size() == 2);
    CHECK(legs[0] == LegKind::line);
    CHECK(legs[1] == LegKind::ball);

    legs = spec_of(EventVariant::Hhat_odd, 1, 0.1, 1, -1, 6).legs();
    REQUIRE(legs.size() == 1);
    CHECK(legs[0] == LegKind::line);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(spec_of(EventVariant::H_odd, 1, 0.1, 1, 0, 3.0).validate(),
                    std::invalid_argument);  // threshold family needs kappa > 4
    CHECK_THROWS_AS(spec_of(EventVariant::H_odd, 1, 2.0, 1, 0, 6.0).validate(),
                    std::invalid_argument);  // eps <= x
    CHECK_THROWS_AS(spec_of(EventVariant::H_even, 1, 0.1, 1, 0, 6.0).validate(),
                    std::invalid_argument);  // line-first needs y < 0
    CHECK_NOTHROW(spec_of(EventVariant::Hpi_odd, 1, 0.1, 1, 0, 3.0).validate());
}

TEST_CASE("renewal parameters after each leg kind") {
    FlowState st;
    int mark = st.add_mark(1.0);
    EventSpec spec = spec_of(EventVariant::H_odd, 1, 0.05, 1.0, -0.5, 6.0);

    // identity state: renewal with c = 1 is the identity on (eps, x)
    auto r0 = renewal_leg(spec, st, mark, LegKind::line, 1.0);
    CHECK(r0.epsilon == doctest::Approx(spec.epsilon));
    CHECK(r0.x == doctest::Approx(spec.x));
    CHECK(r0.y == 0.0);

    // after a line leg y' = 0 always; after a ball leg y' = y_left - w
    StepPolicy pol;
    FlowState st2;
    st2.y_left = spec.y;
    int mark2 = st2.add_mark(1.0);
    for (int k = 0; k < 200; ++k) advance_flow(st2, 0.05 * std::sin(0.3 * k), 5e-4, pol);
    auto rl = renewal_leg(spec, st2, mark2, LegKind::line, 8.0);
    CHECK(rl.y == 0.0);
    CHECK(rl.epsilon == doctest::Approx(spec.epsilon * st2.marks[mark2].deriv * 8.0));
    CHECK(rl.x == doctest::Approx(st2.marks[mark2].image - st2.w));
    auto rb = renewal_leg(spec, st2, mark2, LegKind::ball, 0.25);
    CHECK(rb.y == doctest::Approx(st2.y_left - st2.w));
    CHECK(rl.x > 0.0);
}

TEST_CASE("H1 detection: success iff upsilon threshold falls before swallowing") {
    EventSpec spec = spec_of(EventVariant::H_odd, 1, 0.125, 1.0, 0.0, 6.0);
    EventConstants ec;
    DriverConfig c = base_cfg(6.0, 11);
    int succ = 0, fail = 0;
    for (long i = 0; i < 200; ++i) {
        CrossingRecord rec = detect_crossings_gt4(c, i, spec, ec);
        if (rec.success) {
            ++succ;
            REQUIRE(rec.leg_times.size() == 1);
            CHECK(rec.terminal == EventTerminal::target_reached);
        } else {
            ++fail;
            CHECK(rec.leg_times.empty());
        }
        for (std::size_t k = 1; k < rec.leg_times.size(); ++k)
            CHECK(rec.leg_times[k] > rec.leg_times[k - 1]);
    }
    CHECK(succ > 20);
    CHECK(fail > 20);
}

TEST_CASE("events are monotone in epsilon under coupled noise") {
    EventConstants ec;
    DriverConfig c = base_cfg(6.0, 17);
    for (long i = 0; i < 150; ++i) {
        bool prev = false;
        for (double eps : {0.03125, 0.0625, 0.125, 0.25, 0.5}) {
            EventSpec spec = spec_of(EventVariant::H_odd, 1, eps, 1.0, 0.0, 6.0);
            bool s = detect_crossings_gt4(c, i, spec, ec).success;
            if (prev) CHECK(s);  // success at smaller eps implies success at larger
            prev = s;
        }
    }
}

TEST_CASE("nesting: Hhat_2n implies H_{2n-1} pathwise") {
    EventConstants ec;
    DriverConfig c = base_cfg(6.0, 23);
    EventSpec odd = spec_of(EventVariant::H_odd, 1, 0.25, 1.0, -0.25, 6.0);
    EventSpec hat = spec_of(EventVariant::Hhat_even, 1, 0.25, 1.0, -0.25, 6.0);
    int hats = 0;
    for (long i = 0; i < 300; ++i) {
        bool ph = detect_crossings_gt4(c, i, hat, ec).success;
        bool po = detect_crossings_gt4(c, i, odd, ec).success;
        if (ph) {
            CHECK(po);
            ++hats;
        }
    }
    CHECK(hats > 5);
}

TEST_CASE("nesting in n: success at n implies success at n-1") {
    EventConstants ec;
    DriverConfig c = base_cfg(6.0, 29);
    EventSpec h3 = spec_of(EventVariant::H_odd, 2, 0.25, 0.5, -0.5, 6.0);
    EventSpec h1 = spec_of(EventVariant::H_odd, 1, 0.25, 0.5, -0.5, 6.0);
    int deep = 0;
    for (long i = 0; i < 400; ++i) {
        bool p3 = detect_crossings_gt4(c, i, h3, ec).success;
        bool p1 = detect_crossings_gt4(c, i, h1, ec).success;
        if (p3) {
            CHECK(p1);
            ++deep;
        }
    }
    CHECK(deep >= 1);
}

TEST_CASE("replay over a recorded path agrees with streaming detection") {
    EventSpec spec = spec_of(EventVariant::H_odd, 1, 0.125, 1.0, 0.0, 6.0);
    EventConstants ec;
    DriverConfig c = base_cfg(6.0, 37);
    int checked = 0;
    for (long i = 0; i < 40; ++i) {
        PathSim sim(c, i, spec.y);
        int mark = sim.add_mark(spec.x, spec.x);
        DriverPath rec_path;
        sim.record_into(&rec_path);
        CrossingRecord stream = detect_crossings_gt4(sim, mark, spec, ec);
        CrossingRecord replay = detect_crossings_gt4(rec_path, spec, ec);
        CHECK(stream.success == replay.success);
        checked += stream.success;
    }
    CHECK(checked > 0);
}

TEST_CASE("Hpi trace detection at kappa 3: ball hit frequency decays with eps") {
    EventConstants ec;
    ec.horizon_mult = 8.0;  // short horizon keeps the unit test fast
    DriverConfig c = base_cfg(3.0, 41);
    c.dt.dt_max = 2e-3;
    long hits_big = 0, hits_small = 0;
    const long n = 120;
    for (long i = 0; i < n; ++i) {
        EventSpec big = spec_of(EventVariant::Hpi_odd, 1, 0.5, 1.0, 0.0, 3.0);
        EventSpec small = spec_of(EventVariant::Hpi_odd, 1, 0.125, 1.0, 0.0, 3.0);
        CrossingRecord rb = detect_Hpi(c, i, big, ec);
        CrossingRecord rs = detect_Hpi(c, i, small, ec);
        hits_big += rb.success;
        hits_small += rs.success;
        if (rs.success) CHECK(rb.success);  // coupled monotonicity in eps
    }
    CHECK(hits_big > hits_small);
    CHECK(hits_big > 10);
}

TEST_CASE("Hpi general counter agrees with the fast path at n = 1") {
    EventConstants ec;
    ec.horizon_mult = 4.0;
    DriverConfig c = base_cfg(3.0, 43);
    c.dt.dt_max = 2e-3;
    EventSpec spec = spec_of(EventVariant::Hpi_odd, 1, 0.3, 1.0, 0.0, 3.0);
    int agree = 0, total = 0, succ = 0;
    for (long i = 0; i < 25; ++i) {
        CrossingRecord fast = detect_Hpi(c, i, spec, ec);
        DriverConfig cc = c;
        cc.kappa = spec.kappa;
        PathSim sim(cc, i, 0.0);
        sim.add_mark(spec.x, spec.x);
        DriverPath rec_path;
        sim.record_into(&rec_path);
        double horizon = ec.horizon_mult * (spec.x - spec.y) * (spec.x - spec.y);
        while (sim.state().t < horizon)
            if (sim.step(horizon - sim.state().t) <= 0.0) break;
        CrossingRecord full = detect_Hpi(rec_path.chain, spec, ec);
        ++total;
        agree += (fast.success == full.success);
        succ += full.success;
    }
    CHECK(agree == total);
    CHECK(succ > 0);
}

TEST_CASE("driving minimum below y - 2 forces a strip visit by t = pi^2/4") {
    DriverConfig c = base_cfg(3.0, 47);
    c.dt.dt_max = 1e-3;
    const double t0 = 3.14159265358979 * 3.14159265358979 / 4.0;
    int qualifying = 0;
    for (long i = 0; i < 60 && qualifying < 10; ++i) {
        DriverPath p = sample_sle(c, i, t0);
        double wmin = 0.0;
        for (auto& s : p.chain.steps) wmin = std::min(wmin, s.w1);
        double y = wmin + 2.0 + 0.1;  // min W < y - 2
        if (y > -0.1) continue;
        ++qualifying;
        Crosscut strip = crosscut_halfstrip(y, y - 20.0);
        std::vector<Cplx> poly;
        poly.emplace_back(0.0, 0.0);
        for (std::size_t k = 1; k <= p.chain.size(); ++k) poly.push_back(trace_tip(p.chain, k));
        Crosscut faraway = crosscut_semicircle(1e9, 1.0);  // unreachable second cut
        auto counts = well_oriented_count(poly, strip, faraway, 1);
        CHECK(counts.count >= 1);
    }
    CHECK(qualifying >= 10);
}
