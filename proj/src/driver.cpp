#include "armlab/driver.hpp"

#include <cmath>
#include <stdexcept>

namespace armlab {

void DriverConfig::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("DriverConfig: kappa must be positive");
    if (rho_left && !(x_left < 0.0))
        throw std::invalid_argument("DriverConfig: rho_left requires x_left < 0");
    if (rho_right && !(x_right > 0.0))
        throw std::invalid_argument("DriverConfig: rho_right requires x_right > 0");
    if (!(dt.dt_max > 0.0) || !(dt.c_step > 0.0) || !(dt.delta_hit > 0.0))
        throw std::invalid_argument("DriverConfig: bad dt policy");
}

PathSim::PathSim(const DriverConfig& cfg, std::uint64_t path_index, double y0)
    : cfg_(cfg), rng_(mix_seed(cfg.seed, path_index)) {
    cfg_.validate();
    st_.y_left = y0;
    s_ref_ = std::max(std::abs(y0), 1e-3);
    const double protect = cfg_.kappa / 2.0 - 2.0;
    if (cfg_.rho_left) {
        fp_left_ = st_.add_mark(cfg_.x_left);
        st_.marks[fp_left_].repelled = (*cfg_.rho_left >= protect);
        s_ref_ = std::max(s_ref_, -cfg_.x_left);
    }
    if (cfg_.rho_right) {
        fp_right_ = st_.add_mark(cfg_.x_right);
        st_.marks[fp_right_].repelled = (*cfg_.rho_right >= protect);
        s_ref_ = std::max(s_ref_, cfg_.x_right);
    }
}

int PathSim::add_mark(double x0, double hit_scale) {
    int id = st_.add_mark(x0);
    if (hit_scale > 0.0) st_.marks[id].hit_scale = hit_scale;
    if (std::abs(x0) > s_ref_) s_ref_ = std::abs(x0);
    return id;
}

double PathSim::drift() const {
    double mu = 0.0;
    if (fp_left_ >= 0 && !st_.marks[fp_left_].swallowed)
        mu += *cfg_.rho_left / (st_.w - st_.marks[fp_left_].image);
    if (fp_right_ >= 0 && !st_.marks[fp_right_].swallowed)
        mu += *cfg_.rho_right / (st_.w - st_.marks[fp_right_].image);
    return mu;
}

double PathSim::propose_dt(double cap) const {
    double s = 1e300;
    for (const auto& m : st_.marks) {
        if (m.swallowed) continue;
        double g = std::abs(m.image - st_.w);
        if (g > 0.0 && g < s) s = g;
    }
    // dt_max is a resolution at the initial mark scale; once every tracked
    // gap has outgrown that scale the cap follows the hull quadratically,
    // so long excursions cost only logarithmically many steps
    double dt_cap = cfg_.dt.dt_max;
    if (s < 1e290 && s > s_ref_) {
        double f = s / s_ref_;
        dt_cap *= f * f;
    }
    // Extreme-point gaps vanish at every touch; resolving them below the
    // one-step driver scale buys nothing, so they enter with a floor.
    const double floor = std::sqrt(cfg_.kappa * std::min(dt_cap, cfg_.dt.dt_max));
    double go = st_.o_right - st_.w;
    if (go > floor && go < s) s = go;
    double gy = st_.w - st_.y_left;
    if (gy > floor && gy < s) s = gy;

    double dt = dt_cap;
    if (s < 1e290) dt = std::min(dt, cfg_.dt.c_step * s * s / cfg_.kappa);
    return std::min(dt, cap);
}

double PathSim::step(double dt_cap) {
    if (term_ != Termination::running) return 0.0;

    double want = propose_dt(dt_cap);
    if (pending_.empty()) {
        pending_.push_back({want, std::sqrt(want) * rng_.next()});
    } else if (pending_.back().dt > want * (1.0 + 1e-12)) {
        // bridge-split the committed increment at the requested length
        Pending p = pending_.back();
        pending_.pop_back();
        double d1 = want, d2 = p.dt - d1;
        double b1 = (d1 / p.dt) * p.b + std::sqrt(d1 * d2 / p.dt) * rng_.next();
        pending_.push_back({d2, p.b - b1});
        pending_.push_back({d1, b1});
    }

    const double dt_min = cfg_.dt.dt_max * 0x1.0p-42;
    for (int attempt = 0; attempt < 200; ++attempt) {
        Pending p = pending_.back();
        FlowState saved = st_;
        double w_next = st_.w + drift() * p.dt + std::sqrt(cfg_.kappa) * p.b;
        StepStatus status = std::isfinite(w_next)
                                ? advance_flow(st_, w_next, p.dt, cfg_.dt)
                                : StepStatus::nonfinite;
        bool bad = (status != StepStatus::ok);
        if (!bad) {
            pending_.pop_back();
            if (rec_) {
                rec_->chain.push(p.dt, saved.w, st_.w);
                if (fp_left_ >= 0) rec_->v_left.push_back(st_.marks[fp_left_].image);
                if (fp_right_ >= 0) rec_->v_right.push_back(st_.marks[fp_right_].image);
            }
            if (fp_left_ >= 0 && st_.marks[fp_left_].swallowed)
                term_ = Termination::force_point_hit_left;
            if (fp_right_ >= 0 && st_.marks[fp_right_].swallowed)
                term_ = Termination::force_point_hit_right;
            return p.dt;
        }
        st_ = saved;
        if (p.dt <= dt_min) {
            // last resort: take the step, clamping handled in advance_flow
            ++clamped_;
            double wn = st_.w + drift() * p.dt + std::sqrt(cfg_.kappa) * p.b;
            if (!std::isfinite(wn)) wn = st_.w;
            advance_flow(st_, wn, p.dt, cfg_.dt);
            pending_.pop_back();
            if (rec_) {
                rec_->chain.push(p.dt, saved.w, st_.w);
                if (fp_left_ >= 0) rec_->v_left.push_back(st_.marks[fp_left_].image);
                if (fp_right_ >= 0) rec_->v_right.push_back(st_.marks[fp_right_].image);
            }
            return p.dt;
        }
        pending_.pop_back();
        double d1 = 0.5 * p.dt, d2 = p.dt - d1;
        double b1 = 0.5 * p.b + std::sqrt(d1 * d2 / p.dt) * rng_.next();
        pending_.push_back({d2, p.b - b1});
        pending_.push_back({d1, b1});
    }
    throw std::runtime_error("PathSim::step: refinement did not stabilize");
}

namespace {
DriverPath run_recorded(const DriverConfig& cfg, std::uint64_t path_index, double horizon,
                        bool with_rho) {
    DriverConfig c = cfg;
    if (!with_rho) {
        c.rho_left.reset();
        c.rho_right.reset();
    }
    PathSim sim(c, path_index);
    DriverPath out;
    sim.record_into(&out);
    double t = 0.0;
    while (t < horizon && !sim.terminated()) {
        double dt = sim.step(horizon - t);
        if (dt <= 0.0) break;
        t += dt;
    }
    out.termination = sim.terminated() ? sim.termination() : Termination::horizon_reached;
    return out;
}
}  // namespace

DriverPath sample_sle(const DriverConfig& cfg, std::uint64_t path_index, double horizon) {
    return run_recorded(cfg, path_index, horizon, false);
}

DriverPath sample_sle_rho(const DriverConfig& cfg, std::uint64_t path_index, double horizon) {
    return run_recorded(cfg, path_index, horizon, true);
}

double martingale_value(const MartingaleSpec& spec, const FlowState& st,
                        int mark_left, int mark_right) {
    double m = 1.0;
    if (spec.rho_left) {
        if (mark_left < 0) throw std::invalid_argument("martingale_value: missing left mark");
        const auto& ml = st.marks.at(mark_left);
        if (ml.swallowed) throw std::domain_error("martingale_value: left force point swallowed");
        m *= std::pow(ml.deriv, MartingaleSpec::deriv_exponent(*spec.rho_left, spec.kappa)) *
             std::pow(st.w - ml.image, MartingaleSpec::dist_exponent(*spec.rho_left, spec.kappa));
    }
    if (spec.rho_right) {
        if (mark_right < 0) throw std::invalid_argument("martingale_value: missing right mark");
        const auto& mr = st.marks.at(mark_right);
        if (mr.swallowed) throw std::domain_error("martingale_value: right force point swallowed");
        m *= std::pow(mr.deriv, MartingaleSpec::deriv_exponent(*spec.rho_right, spec.kappa)) *
             std::pow(mr.image - st.w, MartingaleSpec::dist_exponent(*spec.rho_right, spec.kappa));
    }
    if (spec.rho_left && spec.rho_right) {
        const auto& ml = st.marks.at(mark_left);
        const auto& mr = st.marks.at(mark_right);
        m *= std::pow(mr.image - ml.image, spec.cross_exponent());
    }
    return m;
}

}  // namespace armlab
