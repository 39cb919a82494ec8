#include "armlab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace armlab {

int resolve_threads(int requested) {
    if (const char* env = std::getenv("SLE_ARMLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_each_path_parallel(long n, int threads, const std::function<void(long)>& fn) {
    int nt = resolve_threads(threads);
#ifdef _OPENMP
    // exceptions must not escape the parallel region; capture and rethrow
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt) shared(err)
    for (long i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    (void)nt;
    for (long i = 0; i < n; ++i) fn(i);
#endif
}

void for_each_path_serial(long n, const std::function<void(long)>& fn) {
    for (long i = 0; i < n; ++i) fn(i);
}

namespace {
void run_paths(long n, int threads, bool serial, const std::function<void(long)>& fn) {
    if (serial)
        for_each_path_serial(n, fn);
    else
        for_each_path_parallel(n, threads, fn);
}
}  // namespace

// ----------------------------------------------------------------------------
// Fits.
// ----------------------------------------------------------------------------

FitResult fit_loglog(const std::vector<PointStats>& pts) {
    FitResult out;
    std::vector<double> xs, ys, ws;
    for (const auto& p : pts) {
        if (!(p.p_hat > 0.0) || !(p.se > 0.0)) {
            ++out.excluded;
            continue;
        }
        xs.push_back(std::log(p.grid_value));
        ys.push_back(std::log(p.p_hat));
        double rel = p.se / p.p_hat;
        ws.push_back(1.0 / (rel * rel));
    }
    if (xs.size() < 3) return out;  // fewer than 3 usable points aborts the fit
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
    }
    double xbar = sx / sw, ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - xbar, dy = ys[i] - ybar;
        sxx += ws[i] * dx * dx;
        sxy += ws[i] * dx * dy;
        syy += ws[i] * dy * dy;
    }
    if (!(sxx > 0.0)) return out;
    out.slope = sxy / sxx;
    out.intercept = ybar - out.slope * xbar;
    out.se_slope = std::sqrt(1.0 / sxx);
    out.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    out.valid = true;
    return out;
}

// ----------------------------------------------------------------------------
// Event probability estimation.
// ----------------------------------------------------------------------------

void EstimateConfig::validate() const {
    if (grid.size() < 1) throw std::invalid_argument("EstimateConfig: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!((grid[i] > grid[i - 1]) == (grid[1] > grid[0])) || grid[i] == grid[i - 1])
            throw std::invalid_argument("EstimateConfig: grid must be strictly monotone");
    if (paths < 1) throw std::invalid_argument("EstimateConfig: paths must be >= 1");
    if (grid_var == GridVariable::ratio) {
        for (double r : grid)
            if (!(r > 0.0 && r <= 1.0))
                throw std::invalid_argument("EstimateConfig: ratio grid values must be in (0,1]");
    }
    EventSpec probe = event;
    if (grid_var == GridVariable::epsilon) {
        probe.epsilon = grid.front();
        if (x_over_eps > 0.0) probe.x = x_over_eps * probe.epsilon;
    } else {
        probe.y = probe.x - probe.x / grid.front();
    }
    probe.validate();
}

namespace {
ExponentKind alpha_kind(double kappa) {
    return kappa < 8.0 ? ExponentKind::alpha_plus_lt8 : ExponentKind::alpha_plus_ge8;
}

double ratio_exponent(const EventSpec& e) {
    switch (e.variant) {
        case EventVariant::H_odd:
        case EventVariant::Hpi_odd:
            return predicted_exponent(alpha_kind(e.kappa), e.kappa, 2 * e.n - 2);
        case EventVariant::H_even:
        case EventVariant::Hpi_even:
            return predicted_exponent(alpha_kind(e.kappa), e.kappa, 2 * e.n);
        case EventVariant::Hhat_odd:
            return predicted_exponent(ExponentKind::alpha_hat, e.kappa, 2 * e.n - 1);
        case EventVariant::Hhat_even:
            return predicted_exponent(ExponentKind::alpha_hat, e.kappa, 2 * e.n - 1);
    }
    return 0.0;
}

double eps_exponent(const EventSpec& e) {
    switch (e.variant) {
        case EventVariant::H_odd:
        case EventVariant::Hpi_odd:
        case EventVariant::H_even:
        case EventVariant::Hpi_even:
            return predicted_exponent(alpha_kind(e.kappa), e.kappa, 2 * e.n - 1);
        case EventVariant::Hhat_odd:
            return predicted_exponent(ExponentKind::alpha_hat, e.kappa, 2 * e.n - 2);
        case EventVariant::Hhat_even:
            return predicted_exponent(ExponentKind::alpha_hat, e.kappa, 2 * e.n);
    }
    return 0.0;
}

EventSpec spec_at(const EstimateConfig& cfg, double g) {
    EventSpec s = cfg.event;
    if (cfg.grid_var == GridVariable::epsilon) {
        s.epsilon = g;
        if (cfg.x_over_eps > 0.0) s.x = cfg.x_over_eps * g;
    } else {
        s.y = s.x - s.x / g;  // x/(x-y) = g
        if (s.y > 0.0 && s.y < 1e-15) s.y = 0.0;
    }
    return s;
}
}  // namespace

double predicted_event_exponent(const EstimateConfig& cfg) {
    if (cfg.grid_var == GridVariable::ratio) return ratio_exponent(cfg.event);
    // with x = c*eps the (eps/x) factor is constant and the whole eps
    // dependence comes through (x/(x-y))^ratio_exp
    if (cfg.x_over_eps > 0.0) return ratio_exponent(cfg.event);
    return eps_exponent(cfg.event);
}

ExperimentResult estimate_probability(const EstimateConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const long n = cfg.paths;

    for (std::size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const EventSpec spec = spec_at(cfg, cfg.grid[pi]);
        spec.validate();
        std::vector<unsigned char> success(n, 0), horizon(n, 0);
        std::vector<double> weight;
        if (cfg.importance) weight.assign(n, 0.0);
        std::vector<long> clamped(n, 0);

        const std::uint64_t salt = cfg.coupled ? 0 : static_cast<std::uint64_t>(pi) * n;
        DriverConfig base;
        base.kappa = spec.kappa;
        base.seed = cfg.seed;
        base.dt = cfg.dt;

        auto work = [&](long i) {
            const std::uint64_t idx = salt + static_cast<std::uint64_t>(i);
            CrossingRecord rec;
            if (spec.trace_mode()) {
                rec = detect_Hpi(base, idx, spec, cfg.consts);
            } else if (cfg.importance) {
                // sample under SLE_kappa(nu) attracted to x; reweight by M0/M
                double a_prev = predicted_exponent(alpha_kind(spec.kappa), spec.kappa,
                                                   spec.total_legs() - 1);
                double a_cur =
                    predicted_exponent(alpha_kind(spec.kappa), spec.kappa, spec.total_legs());
                DriverConfig dc = base;
                dc.rho_right = spec.kappa * (a_prev - a_cur);
                dc.x_right = spec.x;
                PathSim sim(dc, idx, spec.y);
                int mark = sim.right_force_mark();
                rec = detect_crossings_gt4(sim, mark, spec, cfg.consts);
                if (rec.success) {
                    // evaluate M at the decision time from the (possibly just
                    // frozen) tracked values; a nonpositive gap means M blew
                    // up and the weight is zero
                    double e_deriv =
                        MartingaleSpec::deriv_exponent(*dc.rho_right, spec.kappa);
                    double e_dist = MartingaleSpec::dist_exponent(*dc.rho_right, spec.kappa);
                    const auto& m = sim.state().marks[mark];
                    double gap = m.image - sim.state().w;
                    double m0 = std::pow(spec.x, e_dist);
                    if (gap > 0.0 && m.deriv > 0.0)
                        weight[i] =
                            m0 / (std::pow(m.deriv, e_deriv) * std::pow(gap, e_dist));
                }
                clamped[i] = sim.clamped_steps();
            } else {
                rec = detect_crossings_gt4(base, idx, spec, cfg.consts);
            }
            success[i] = rec.success ? 1 : 0;
            horizon[i] = rec.terminal == EventTerminal::horizon ? 1 : 0;
        };
        run_paths(n, cfg.threads, cfg.serial, work);

        PointStats ps;
        ps.grid_value = cfg.grid[pi];
        ps.trials = n;
        for (long i = 0; i < n; ++i) {
            ps.hits += success[i];
            ps.horizon_failures += horizon[i];
            out.clamped_steps += clamped[i];
        }
        if (cfg.importance) {
            double s = 0.0, s2 = 0.0;
            for (long i = 0; i < n; ++i) {
                double v = success[i] ? weight[i] : 0.0;
                s += v;
                s2 += v * v;
            }
            ps.p_hat = s / n;
            double var = std::max(0.0, s2 / n - ps.p_hat * ps.p_hat);
            ps.se = std::sqrt(var / n);
        } else {
            double p = static_cast<double>(ps.hits) / n;
            ps.p_hat = p;
            ps.se = std::sqrt(std::max(0.0, p * (1.0 - p) / n));
        }
        out.points.push_back(ps);
    }
    out.fit = fit_loglog(out.points);
    out.predicted = predicted_event_exponent(cfg);
    return out;
}

// ----------------------------------------------------------------------------
// Moment scaling.
// ----------------------------------------------------------------------------

void MomentConfig::validate() const {
    if (grid.size() < 1) throw std::invalid_argument("MomentConfig: empty grid");
    if (paths < 1) throw std::invalid_argument("MomentConfig: paths >= 1");
    switch (kind) {
        case MomentKind::lemma24:
            if (!(nu <= kappa / 2.0 - 4.0))
                throw std::domain_error("lemma24 needs nu <= kappa/2 - 4");
            if (!(lambda <= 0.0)) throw std::domain_error("lemma24 needs lambda <= 0");
            break;
        case MomentKind::lemma25:
            if (!(kappa > 4.0)) throw std::domain_error("lemma25 needs kappa > 4");
            if (!(nu >= kappa / 2.0 - 2.0))
                throw std::domain_error("lemma25 needs nu >= kappa/2 - 2");
            if (!(lambda <= 0.0)) throw std::domain_error("lemma25 needs lambda <= 0");
            break;
        case MomentKind::prop31: {
            if (!(lambda >= 0.0)) throw std::domain_error("prop31 needs lambda >= 0");
            double lo = kappa * lambda - kappa * u1(kappa, lambda) + 8.0 - 2.0 * kappa;
            double hi = kappa * lambda + kappa * u1(kappa, lambda);
            if (!(lo < kappa * b && kappa * b <= hi))
                throw std::domain_error("prop31: b outside the admissible window");
            break;
        }
        case MomentKind::prop42: {
            if (!(kappa <= 4.0)) throw std::domain_error("prop42 needs kappa <= 4");
            if (!(4.0 * b >= (lambda - b) * (kappa * lambda - kappa * b + 4.0 - kappa)))
                throw std::domain_error("prop42: constraint 4b >= (l-b)(kl-kb+4-k) fails");
            break;
        }
    }
}

double MomentConfig::predicted_slope() const {
    switch (kind) {
        case MomentKind::lemma24:
        case MomentKind::lemma25:
            return lambda;
        default:
            return u1(kappa, lambda) + lambda - b;
    }
}

ExperimentResult moment_scaling_test(const MomentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const long n = cfg.paths;

    for (std::size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const double g = cfg.grid[pi];
        std::vector<double> value(n, 0.0);
        std::vector<unsigned char> horizon(n, 0);
        const std::uint64_t salt = static_cast<std::uint64_t>(pi) * n;

        auto work = [&](long i) {
            const std::uint64_t idx = salt + static_cast<std::uint64_t>(i);
            switch (cfg.kind) {
                case MomentKind::lemma24:
                case MomentKind::lemma25: {
                    // grid value is x - y with the force point at x
                    double x = cfg.kind == MomentKind::lemma25 ? cfg.x : g / 2.0;
                    double y = x - g;
                    DriverConfig dc;
                    dc.kappa = cfg.kappa;
                    dc.seed = cfg.seed;
                    dc.dt = cfg.dt;
                    dc.rho_right = cfg.nu;
                    dc.x_right = x;
                    PathSim sim(dc, idx, y);
                    int mark = sim.right_force_mark();
                    const double hor = cfg.horizon_mult * g * g;
                    if (cfg.kind == MomentKind::lemma24) {
                        // run to the accumulation time T at x
                        while (!sim.terminated() && sim.state().t < hor)
                            if (sim.step(hor - sim.state().t) <= 0.0) break;
                        if (!sim.terminated()) {
                            horizon[i] = 1;
                            return;
                        }
                        double gx = sim.state().marks[mark].image;
                        double gy = sim.state().y_left;
                        value[i] = std::pow(gx - gy, cfg.lambda);
                    } else {
                        // run to sigma = first hit of (-inf, y]
                        const double line_scale = -y > 0.0 ? -y : 1.0;
                        bool hit = false;
                        double min_ups = upsilon(sim.state(), mark);
                        while (sim.state().t < hor) {
                            if (sim.step(hor - sim.state().t) <= 0.0) break;
                            min_ups = std::min(min_ups, upsilon(sim.state(), mark));
                            if (sim.state().w - sim.state().y_left <=
                                cfg.dt.delta_hit * line_scale) {
                                hit = true;
                                break;
                            }
                        }
                        if (!hit) {
                            horizon[i] = 1;
                            return;
                        }
                        const auto& st = sim.state();
                        double gx = st.marks[mark].image;
                        double gy = st.y_left;
                        bool pass = true;
                        if (cfg.dist_frac > 0.0) pass = min_ups >= cfg.dist_frac * x;
                        value[i] = pass ? std::pow(gx - gy, cfg.lambda) : 0.0;
                    }
                    break;
                }
                case MomentKind::prop31: {
                    DriverConfig dc;
                    dc.kappa = cfg.kappa;
                    dc.seed = cfg.seed;
                    dc.dt = cfg.dt;
                    PathSim sim(dc, idx, 0.0);
                    int mark = sim.add_mark(cfg.x, cfg.x);
                    const double hor = cfg.horizon_mult * cfg.x * cfg.x;
                    while (sim.state().t < hor) {
                        if (sim.step(hor - sim.state().t) <= 0.0) break;
                        const auto& st = sim.state();
                        const auto& m = st.marks[mark];
                        if (m.swallowed) return;  // tau-hat_eps >= T0: contributes 0
                        if (m.image - st.o_right <= g * m.deriv) {
                            value[i] = std::pow(m.image - st.w, cfg.lambda - cfg.b) *
                                       std::pow(m.deriv, cfg.b);
                            return;
                        }
                    }
                    horizon[i] = 1;
                    break;
                }
                case MomentKind::prop42: {
                    EventSpec es;
                    es.variant = EventVariant::Hpi_odd;
                    es.n = 1;
                    es.epsilon = g;
                    es.x = cfg.x;
                    es.y = 0.0;
                    es.kappa = cfg.kappa;
                    DriverConfig dc;
                    dc.kappa = cfg.kappa;
                    dc.seed = cfg.seed;
                    dc.dt = cfg.dt;
                    EventConstants ec;
                    ec.horizon_mult = cfg.horizon_mult;
                    // Euclidean hitting time via the trace fast path; the
                    // moment needs the flow state at the hit, so rerun the
                    // flow to the recorded hitting time.
                    CrossingRecord rec = detect_Hpi(dc, idx, es, ec);
                    if (!rec.success) {
                        horizon[i] = rec.terminal == EventTerminal::horizon ? 1 : 0;
                        return;
                    }
                    PathSim sim(dc, idx, 0.0);
                    int mark = sim.add_mark(cfg.x, cfg.x);
                    while (sim.state().t < rec.leg_times.front()) {
                        if (sim.step(rec.leg_times.front() - sim.state().t) <= 0.0) break;
                    }
                    const auto& m = sim.state().marks[mark];
                    value[i] = std::pow(m.image - sim.state().w, cfg.lambda - cfg.b) *
                               std::pow(m.deriv, cfg.b);
                    break;
                }
            }
        };
        run_paths(n, cfg.threads, false, work);

        PointStats ps;
        ps.grid_value = g;
        ps.trials = n;
        double s = 0.0, s2 = 0.0;
        for (long i = 0; i < n; ++i) {
            s += value[i];
            s2 += value[i] * value[i];
            ps.horizon_failures += horizon[i];
            if (value[i] != 0.0) ++ps.hits;
        }
        ps.p_hat = s / n;
        double var = std::max(0.0, s2 / n - ps.p_hat * ps.p_hat);
        ps.se = std::sqrt(var / n);
        out.points.push_back(ps);
    }
    out.fit = fit_loglog(out.points);
    out.predicted = cfg.predicted_slope();
    return out;
}

// ----------------------------------------------------------------------------
// Martingale drift and Girsanov consistency.
// ----------------------------------------------------------------------------

DriftTestResult martingale_drift_test(const MartingaleSpec& spec, long paths, double horizon,
                                      std::uint64_t seed, const StepPolicy& pol, int threads) {
    std::vector<double> ratio(paths, 0.0);
    std::vector<unsigned char> early(paths, 0);

    auto work = [&](long i) {
        DriverConfig dc;
        dc.kappa = spec.kappa;
        dc.seed = seed;
        dc.dt = pol;
        PathSim sim(dc, static_cast<std::uint64_t>(i), 0.0);
        int ml = -1, mr = -1;
        if (spec.rho_left) ml = sim.add_mark(spec.x_left, -spec.x_left);
        if (spec.rho_right) mr = sim.add_mark(spec.x_right, spec.x_right);
        double m0 = martingale_value(spec, sim.state(), ml, mr);
        // freeze at the first time any gap < 10 * delta_hit * scale
        auto safe = [&]() {
            const auto& st = sim.state();
            for (int id : {ml, mr}) {
                if (id < 0) continue;
                const auto& m = st.marks[id];
                if (m.swallowed) return false;
                if (std::abs(m.image - st.w) < 10.0 * pol.delta_hit * m.hit_scale) return false;
            }
            return true;
        };
        FlowState last = sim.state();
        while (sim.state().t < horizon && safe()) {
            last = sim.state();
            if (sim.step(horizon - sim.state().t) <= 0.0) break;
        }
        const FlowState& st = safe() ? sim.state() : last;
        if (!safe()) early[i] = 1;
        ratio[i] = martingale_value(spec, st, ml, mr) / m0;
    };
    run_paths(paths, threads, false, work);

    DriftTestResult out;
    out.paths = paths;
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < paths; ++i) {
        s += ratio[i];
        s2 += ratio[i] * ratio[i];
        out.frozen_early += early[i];
    }
    out.mean = s / paths;
    double var = std::max(0.0, s2 / paths - out.mean * out.mean);
    out.se = std::sqrt(var / paths);
    out.z = out.se > 0.0 ? (out.mean - 1.0) / out.se : 0.0;
    return out;
}

GirsanovResult girsanov_check(double kappa, double rho, double x, double frac, long paths,
                              double horizon, std::uint64_t seed, const StepPolicy& pol,
                              int threads) {
    // direct: SLE_kappa(rho)
    std::vector<unsigned char> hit_direct(paths, 0);
    auto direct = [&](long i) {
        DriverConfig dc;
        dc.kappa = kappa;
        dc.seed = seed;
        dc.dt = pol;
        dc.rho_right = rho;
        dc.x_right = x;
        PathSim sim(dc, static_cast<std::uint64_t>(i), 0.0);
        int mark = sim.right_force_mark();
        while (sim.state().t < horizon && !sim.terminated()) {
            if (sim.step(horizon - sim.state().t) <= 0.0) break;
            const auto& m = sim.state().marks[mark];
            if (m.swallowed) break;
            if (std::abs(m.image - sim.state().w) < 10.0 * pol.delta_hit * x) break;
            if (upsilon(sim.state(), mark) < frac * x) {
                hit_direct[i] = 1;
                break;
            }
        }
    };
    run_paths(paths, threads, false, direct);

    // weighted: plain SLE reweighted by M_tau / M_0
    std::vector<double> wval(paths, 0.0);
    MartingaleSpec ms;
    ms.kappa = kappa;
    ms.rho_right = rho;
    ms.x_right = x;
    auto weighted = [&](long i) {
        DriverConfig dc;
        dc.kappa = kappa;
        dc.seed = seed + 0x517cc1b727220a95ULL;  // independent stream
        dc.dt = pol;
        PathSim sim(dc, static_cast<std::uint64_t>(i), 0.0);
        int mark = sim.add_mark(x, x);
        double m0 = martingale_value(ms, sim.state(), -1, mark);
        bool hit = false;
        FlowState last = sim.state();
        auto safe = [&]() {
            const auto& m = sim.state().marks[mark];
            return !m.swallowed &&
                   std::abs(m.image - sim.state().w) >= 10.0 * pol.delta_hit * x;
        };
        while (sim.state().t < horizon && safe()) {
            last = sim.state();
            if (sim.step(horizon - sim.state().t) <= 0.0) break;
            if (!safe()) break;
            if (!hit && upsilon(sim.state(), mark) < frac * x) hit = true;
        }
        const FlowState& st = safe() ? sim.state() : last;
        if (hit) wval[i] = martingale_value(ms, st, -1, mark) / m0;
    };
    run_paths(paths, threads, false, weighted);

    GirsanovResult out;
    double s = 0.0;
    for (long i = 0; i < paths; ++i) s += hit_direct[i];
    out.p_direct = s / paths;
    out.se_direct = std::sqrt(std::max(0.0, out.p_direct * (1.0 - out.p_direct) / paths));
    double sw = 0.0, sw2 = 0.0;
    for (long i = 0; i < paths; ++i) {
        sw += wval[i];
        sw2 += wval[i] * wval[i];
    }
    out.p_weighted = sw / paths;
    double var = std::max(0.0, sw2 / paths - out.p_weighted * out.p_weighted);
    out.se_weighted = std::sqrt(var / paths);
    double comb = std::sqrt(out.se_direct * out.se_direct + out.se_weighted * out.se_weighted);
    out.z = comb > 0.0 ? (out.p_weighted - out.p_direct) / comb : 0.0;
    return out;
}

// ----------------------------------------------------------------------------
// Invariant density of the time-changed J-diffusion.
// ----------------------------------------------------------------------------

DensityTestResult invariant_density_test(double kappa, double nu, long n_samples,
                                         double burn_in, std::uint64_t seed, double dt,
                                         double stride) {
    if (!(8.0 + 2.0 * nu < 2.0 * kappa))
        throw std::domain_error("invariant_density_test: need 8 + 2 nu < 2 kappa");
    DensityTestResult out;
    out.beta_a = 2.0 * (kappa - nu - 4.0) / kappa;
    out.beta_b = 4.0 / kappa;

    GaussStream rng(mix_seed(seed, 0x4a6469ffULL));
    const double drift_a = kappa - nu - 4.0;
    const double drift_b = kappa - nu - 2.0;
    double j = 1.0;
    const double sdt = std::sqrt(dt);
    auto advance = [&](double time) {
        long steps = static_cast<long>(time / dt + 0.5);
        for (long s = 0; s < steps; ++s) {
            double diff = kappa * j * (1.0 - j);
            j += (drift_a - drift_b * j) * dt +
                 std::sqrt(std::max(diff, 0.0)) * sdt * rng.next();
            if (j < 0.0) j = -j;          // reflect at the boundaries
            if (j > 1.0) j = 2.0 - j;
            if (j < 0.0) j = 0.0;
        }
    };
    advance(burn_in);
    std::vector<double> samples;
    samples.reserve(n_samples);
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < n_samples; ++i) {
        advance(stride);
        samples.push_back(j);
        s += j;
        s2 += j * j;
    }
    out.samples = n_samples;
    out.mean = s / n_samples;
    double var = std::max(0.0, s2 / n_samples - out.mean * out.mean);
    out.se_mean = std::sqrt(var / n_samples);
    std::sort(samples.begin(), samples.end());
    const double a = out.beta_a, b = out.beta_b;
    out.ks = ks_statistic_sorted(samples, [a, b](double x) { return beta_cdf(a, b, x); });
    return out;
}

double betainc_regularized(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // continued fraction (Lentz); symmetry split at the distribution mode
    auto cf = [](double a, double b, double x) {
        const double tiny = 1e-300;
        double qab = a + b, qap = a + 1.0, qam = a - 1.0;
        double c = 1.0, d = 1.0 - qab * x / qap;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            int m2 = 2 * m;
            double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-14) break;
        }
        return h;
    };
    double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * cf(a, b, x) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta) * cf(b, a, 1.0 - x) / b;
}

double beta_cdf(double a, double b, double x) { return betainc_regularized(a, b, x); }

double ks_statistic_sorted(const std::vector<double>& sorted,
                           const std::function<double(double)>& cdf) {
    double ks = 0.0;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = cdf(sorted[i]);
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return ks;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;  // consume ties on both sides
        while (j < b.size() && b[j] <= v) ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        ks = std::max(ks, std::abs(fa - fb));
    }
    return ks;
}

double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        // series representation
        double sum = 1.0 / a, term = sum;
        for (int n = 1; n < 500; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for Q(a,x) (Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace armlab
