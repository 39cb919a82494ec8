#include <doctest.h>

#include <cmath>
#include <vector>

#include "armlab/driver.hpp"
#include "armlab/estimator.hpp"
#include "armlab/exponents.hpp"

using namespace armlab;

TEST_CASE("config validation") {
    DriverConfig c;
    c.kappa = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.kappa = 6.0;
    c.rho_right = 1.0;
    c.x_right = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.x_right = 1.0;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("same seed gives bit-identical paths") {
    DriverConfig c;
    c.kappa = 6.0;
    c.seed = 99;
    DriverPath a = sample_sle(c, 3, 0.5);
    DriverPath b = sample_sle(c, 3, 0.5);
    REQUIRE(a.chain.size() == b.chain.size());
    bool same = true;
    for (std::size_t i = 0; i < a.chain.size(); ++i) {
        if (a.chain.steps[i].w1 != b.chain.steps[i].w1 ||
            a.chain.steps[i].dt != b.chain.steps[i].dt)
            same = false;
    }
    CHECK(same);
    DriverPath d = sample_sle(c, 4, 0.5);
    CHECK(d.chain.steps.back().w1 != a.chain.steps.back().w1);
}

TEST_CASE("empirical variance of W_1 is kappa") {
    const double kappa = 3.7;
    const long n = 10000;
    DriverConfig c;
    c.kappa = kappa;
    c.seed = 7;
    c.dt.dt_max = 1e-2;
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < n; ++i) {
        PathSim sim(c, i);
        while (sim.state().t < 1.0 - 1e-12) sim.step(1.0 - sim.state().t);
        double w = sim.state().w;
        s += w;
        s2 += w * w;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    double se_var = kappa * std::sqrt(2.0 / n);
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(kappa / n));
    CHECK(std::abs(var - kappa) <= 3.0 * se_var);
}

TEST_CASE("running minimum matches the reflection principle") {
    // P[min_{t<=T} W_t < -a] = 2 Phi(-a / sqrt(kappa T)) for W = sqrt(k) B
    const double kappa = 6.0;
    const double T = 3.14159265358979 * 3.14159265358979 / 4.0;
    const double a = 3.0;  // R + 2 with R = 1
    const long n = 10000;
    DriverConfig c;
    c.kappa = kappa;
    c.seed = 21;
    c.dt.dt_max = 1e-3;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        PathSim sim(c, i);
        bool hit = false;
        while (sim.state().t < T - 1e-12) {
            sim.step(T - sim.state().t);
            if (sim.state().w < -a) {
                hit = true;
                break;
            }
        }
        hits += hit;
    }
    double p_hat = static_cast<double>(hits) / n;
    double exact = 2.0 * normal_cdf(-a / std::sqrt(kappa * T));
    double se = std::sqrt(exact * (1.0 - exact) / n);
    // discrete monitoring misses excursions: estimate is biased low by O(sqrt(dt))
    CHECK(p_hat <= exact + 3.0 * se);
    CHECK(p_hat >= exact - 3.0 * se - 0.02);

    // sharp cross-check against plain Brownian motion: min sqrt(k) B on [0,T]
    // has the law of min B on [0, kT]; same step count
    long hits_b = 0;
    const double dtb = kappa * 1e-3;
    const long steps = static_cast<long>(kappa * T / dtb + 0.5);
    for (long i = 0; i < n; ++i) {
        GaussStream gs(mix_seed(77, i));
        double b = 0.0;
        bool hit = false;
        for (long k = 0; k < steps && !hit; ++k) {
            b += std::sqrt(dtb) * gs.next();
            if (b < -a) hit = true;
        }
        hits_b += hit;
    }
    double p_b = static_cast<double>(hits_b) / n;
    double comb = std::sqrt(2.0 * exact * (1.0 - exact) / n);
    CHECK(std::abs(p_hat - p_b) <= 3.5 * comb);
}

TEST_CASE("rho = 0 reduces to plain SLE with the same seed") {
    DriverConfig plain;
    plain.kappa = 5.0;
    plain.seed = 12;
    DriverConfig rho = plain;
    rho.rho_right = 0.0;
    rho.x_right = 1.0;
    DriverPath a = sample_sle(plain, 5, 0.3);
    DriverPath b = sample_sle_rho(rho, 5, 0.3);
    REQUIRE(a.chain.size() == b.chain.size());
    for (std::size_t i = 0; i < a.chain.size(); i += 7)
        CHECK(a.chain.steps[i].w1 == doctest::Approx(b.chain.steps[i].w1).epsilon(1e-12));
}

TEST_CASE("nu = kappa/2 - 4 accumulates at the force point (exact Bessel law)") {
    // V - W is sqrt(kappa) * BES(4/3); the accumulation time from x is
    // T = x^2/(2 kappa gamma) with gamma ~ Gamma(1/3), so
    // P[T <= H] = 1 - P(1/3, x^2/(2 kappa H)).
    const double kappa = 6.0, x = 1.0;
    DriverConfig c;
    c.kappa = kappa;
    c.seed = 31;
    c.rho_right = kappa / 2.0 - 4.0;
    c.x_right = x;
    const long n = 1000;
    auto frac_done = [&](double horizon) {
        long done = 0;
        for (long i = 0; i < n; ++i) {
            DriverPath p = sample_sle_rho(c, i, horizon);
            if (p.termination == Termination::force_point_hit_right) ++done;
        }
        return static_cast<double>(done) / n;
    };
    double f50 = frac_done(50.0);
    double exact50 = 1.0 - gamma_p(1.0 / 3.0, x * x / (2.0 * kappa * 50.0));
    double se = std::sqrt(exact50 * (1.0 - exact50) / n);
    CHECK(std::abs(f50 - exact50) <= 3.5 * se + 0.005);
    // longer horizon: monotone approach to 1
    double f200 = frac_done(200.0);
    CHECK(f200 >= f50);
    double exact200 = 1.0 - gamma_p(1.0 / 3.0, x * x / (2.0 * kappa * 200.0));
    CHECK(std::abs(f200 - exact200) <= 3.5 * se + 0.005);
}

TEST_CASE("nu = kappa/2 - 2 never swallows the force point") {
    DriverConfig c;
    c.kappa = 6.0;
    c.seed = 32;
    c.rho_right = 1.0;  // kappa/2 - 2
    c.x_right = 1.0;
    const long n = 400;
    long swallowed = 0;
    for (long i = 0; i < n; ++i) {
        DriverPath p = sample_sle_rho(c, i, 15.0);
        if (p.termination != Termination::horizon_reached) ++swallowed;
    }
    CHECK(swallowed == 0);
}

TEST_CASE("V stays on its side of W throughout") {
    DriverConfig c;
    c.kappa = 6.0;
    c.seed = 8;
    c.rho_left = 1.0;
    c.x_left = -0.5;
    c.rho_right = -1.0;
    c.x_right = 1.0;
    DriverPath p = sample_sle_rho(c, 2, 5.0);
    REQUIRE(p.v_left.size() == p.chain.size());
    REQUIRE(p.v_right.size() == p.chain.size());
    for (std::size_t i = 0; i < p.chain.size(); ++i) {
        CHECK(p.v_left[i] <= p.chain.steps[i].w1 + 1e-12);
        CHECK(p.v_right[i] >= p.chain.steps[i].w1 - 1e-12);
    }
}

TEST_CASE("martingale value at t = 0") {
    FlowState st;
    int mr = st.add_mark(2.0);
    MartingaleSpec ms;
    ms.kappa = 6.0;
    ms.rho_right = 1.0;
    ms.x_right = 2.0;
    CHECK(martingale_value(ms, st, -1, mr) == doctest::Approx(std::pow(2.0, 1.0 / 6.0)));

    FlowState st2;
    int ml2 = st2.add_mark(-1.5);
    int mr2 = st2.add_mark(2.0);
    MartingaleSpec both;
    both.kappa = 6.0;
    both.rho_left = 2.0;
    both.rho_right = 1.0;
    both.x_left = -1.5;
    both.x_right = 2.0;
    double expect = std::pow(1.5, 2.0 / 6.0) * std::pow(2.0, 1.0 / 6.0) *
                    std::pow(3.5, 2.0 * 1.0 / (2.0 * 6.0));
    CHECK(martingale_value(both, st2, ml2, mr2) == doctest::Approx(expect));

    // specialization nu = kappa*u2(lambda): M_0 = x^{u2(lambda)}
    double kappa = 6.0, lambda = 1.0;
    double nu = kappa * u2(kappa, lambda);
    MartingaleSpec spec3;
    spec3.kappa = kappa;
    spec3.rho_right = nu;
    spec3.x_right = 2.0;
    FlowState st3;
    int mr3 = st3.add_mark(2.0);
    CHECK(martingale_value(spec3, st3, -1, mr3) ==
          doctest::Approx(std::pow(2.0, u2(kappa, lambda))));
}

TEST_CASE("martingale mean is flat over a short horizon") {
    MartingaleSpec ms;
    ms.kappa = 6.0;
    ms.rho_right = 1.0;
    ms.x_right = 1.0;
    StepPolicy pol;
    auto res = martingale_drift_test(ms, 4000, 0.02, 5, pol);
    CHECK(std::abs(res.z) <= 4.0);
}

TEST_CASE("scaling invariance of the terminal radius proxy") {
    // SLE_kappa(nu) with nu >= kappa/2-2: dist(eta, x)/x has an x-free law;
    // the conformal radius proxy stands in for dist
    const double kappa = 6.0, nu = 1.0;
    const long n = 1500;
    auto sample_ups = [&](double x, std::uint64_t seed_salt) {
        std::vector<double> out;
        DriverConfig c;
        c.kappa = kappa;
        c.seed = 1000 + seed_salt;
        c.rho_right = nu;
        c.x_right = x;
        c.dt.dt_max = 1e-3 * x * x;  // scale-covariant stepping
        c.dt.c_step = 0.03;
        const double horizon = 3.0 * x * x;
        for (long i = 0; i < n; ++i) {
            PathSim sim(c, i);
            int mark = sim.right_force_mark();
            // running min: Upsilon is nonincreasing, so the min is the exact
            // value and truncates cancellation noise after deep excursions
            double ups = upsilon(sim.state(), mark);
            while (sim.state().t < horizon && !sim.terminated()) {
                if (sim.step(horizon - sim.state().t) <= 0.0) break;
                ups = std::min(ups, upsilon(sim.state(), mark));
            }
            out.push_back(ups / x);
        }
        return out;
    };
    auto a = sample_ups(1.0, 0);
    auto b = sample_ups(2.0, 1);
    double ks = ks_two_sample(a, b);
    // 1% two-sample critical value 1.63 sqrt(2/n)
    CHECK(ks <= 1.63 * std::sqrt(2.0 / n));
}
