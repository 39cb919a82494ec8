#include "armlab/events.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace armlab {

void EventSpec::validate() const {
    if (n < 1) throw std::invalid_argument("EventSpec: n must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("EventSpec: epsilon must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("EventSpec: kappa must be positive");
    if (trace_mode()) {
        // geometric detection also runs at kappa in (4,8) for mode agreement
        if (!(x > 0.0 && x > y)) throw std::invalid_argument("EventSpec: Hpi needs x > 0, x > y");
    } else {
        if (!(kappa > 4.0))
            throw std::invalid_argument("EventSpec: threshold variants need kappa > 4");
        if (!(y <= 0.0 && epsilon <= x))
            throw std::invalid_argument("EventSpec: need y <= 0 < eps <= x");
        const bool line_first =
            variant == EventVariant::H_even || variant == EventVariant::Hhat_odd;
        if (line_first && !(y < 0.0))
            throw std::invalid_argument("EventSpec: line-first variants need y < 0");
    }
}

int EventSpec::total_legs() const {
    switch (variant) {
        case EventVariant::H_odd:
        case EventVariant::Hhat_odd:
        case EventVariant::Hpi_odd:
            return 2 * n - 1;
        default:
            return 2 * n;
    }
}

std::vector<LegKind> EventSpec::legs() const {
    const bool ball_first =
        variant == EventVariant::H_odd || variant == EventVariant::Hhat_even ||
        variant == EventVariant::Hpi_odd;
    std::vector<LegKind> out;
    int total = total_legs();
    out.reserve(total);
    for (int i = 0; i < total; ++i) {
        bool ball = ball_first ? (i % 2 == 0) : (i % 2 == 1);
        out.push_back(ball ? LegKind::ball : LegKind::line);
    }
    return out;
}

EventTracker::EventTracker(const EventSpec& spec, const EventConstants& c, const StepPolicy& pol)
    : spec_(spec), c_(c), pol_(pol), legs_(spec.legs()) {
    line_scale_ = -spec.y;
}

bool EventTracker::update(const FlowState& st, int mark_x) {
    const auto& m = st.marks[mark_x];
    while (leg_idx_ < legs_.size()) {
        bool done = false;
        if (legs_[leg_idx_] == LegKind::ball) {
            if (leg_idx_ == 0)
                done = (m.image - st.o_right) <= spec_.epsilon * m.deriv;  // tau-hat_eps
            else
                done = (m.image - st.w) <= c_.c_ball * spec_.epsilon * m.deriv;
        } else {
            done = (st.w - st.y_left) <= pol_.delta_hit * line_scale_;
        }
        if (!done) break;
        rec_.leg_times.push_back(st.t);
        ++leg_idx_;
        rec_.legs_done = static_cast<int>(leg_idx_);
        if (leg_idx_ < legs_.size() && legs_[leg_idx_] == LegKind::line)
            line_scale_ = std::max(st.w - st.y_left, 1e-9 * spec_.x);
    }
    rec_.final_time = st.t;
    if (leg_idx_ == legs_.size()) {
        rec_.success = true;
        rec_.terminal = EventTerminal::target_reached;
        return true;
    }
    if (m.swallowed) {
        rec_.success = false;
        rec_.terminal = EventTerminal::swallowed_x;
        return true;
    }
    return false;
}

CrossingRecord detect_crossings_gt4(PathSim& sim, int mark_x, const EventSpec& spec,
                                    const EventConstants& c) {
    EventTracker tracker(spec, c, sim.policy());
    const double horizon = c.horizon_mult * (spec.x - spec.y) * (spec.x - spec.y);
    if (tracker.update(sim.state(), mark_x)) return tracker.record();
    while (sim.state().t < horizon) {
        double dt = sim.step(horizon - sim.state().t);
        if (dt <= 0.0) break;  // driver terminated (force-point hit)
        if (tracker.update(sim.state(), mark_x)) return tracker.record();
    }
    tracker.record().terminal = EventTerminal::horizon;
    tracker.record().success = false;
    tracker.record().final_time = sim.state().t;
    return tracker.record();
}

CrossingRecord detect_crossings_gt4(const DriverConfig& base, std::uint64_t path_index,
                                    const EventSpec& spec, const EventConstants& c) {
    spec.validate();
    DriverConfig cfg = base;
    cfg.kappa = spec.kappa;
    cfg.rho_left.reset();
    cfg.rho_right.reset();
    PathSim sim(cfg, path_index, spec.y);
    int mark = sim.add_mark(spec.x, spec.x);
    return detect_crossings_gt4(sim, mark, spec, c);
}

CrossingRecord detect_crossings_gt4(const DriverPath& path, const EventSpec& spec,
                                    const EventConstants& c) {
    spec.validate();
    StepPolicy pol;  // replay uses the default hit thresholds
    FlowState st;
    st.y_left = spec.y;
    int mark = st.add_mark(spec.x);
    EventTracker tracker(spec, c, pol);
    if (tracker.update(st, mark)) return tracker.record();
    for (const auto& s : path.chain.steps) {
        advance_flow(st, s.w1, s.dt, pol);
        if (tracker.update(st, mark)) return tracker.record();
    }
    tracker.record().terminal = EventTerminal::horizon;
    tracker.record().success = false;
    return tracker.record();
}

RenewedParams renewal_leg(const EventSpec& spec, const FlowState& st, int mark_x,
                          LegKind completed, double c_renew) {
    const auto& m = st.marks[mark_x];
    RenewedParams r;
    r.epsilon = spec.epsilon * m.deriv * c_renew;
    r.x = m.image - st.w;
    r.y = completed == LegKind::line ? 0.0 : st.y_left - st.w;
    return r;
}

namespace {

CrossingRecord detect_hpi_polyline(const std::vector<Cplx>& polyline,
                                   const std::vector<double>& seg_times, const EventSpec& spec,
                                   const EventConstants& c, double final_time) {
    Crosscut ball = crosscut_semicircle(spec.x, spec.epsilon, c.circle_segments);
    double trunc = spec.y - c.strip_trunc_mult * (spec.x - spec.y);
    Crosscut strip = crosscut_halfstrip(spec.y, trunc);
    const bool ball_first = spec.variant == EventVariant::Hpi_odd;
    const Crosscut& xi_m = ball_first ? ball : strip;
    const Crosscut& xi_p = ball_first ? strip : ball;
    CrossingCounts counts = well_oriented_count(polyline, xi_m, xi_p, spec.total_legs());

    CrossingRecord rec;
    rec.legs_done = counts.count;
    for (double t : counts.times) {
        std::size_t idx = static_cast<std::size_t>(t);
        rec.leg_times.push_back(idx < seg_times.size() ? seg_times[idx] : final_time);
    }
    rec.final_time = final_time;
    rec.success = counts.count >= spec.total_legs();
    rec.terminal = rec.success ? EventTerminal::target_reached : EventTerminal::horizon;
    return rec;
}

}  // namespace

CrossingRecord detect_Hpi(const DiscretizedChain& chain, const EventSpec& spec,
                          const EventConstants& c) {
    spec.validate();
    std::vector<double> cum(chain.size() + 1, 0.0);
    for (std::size_t j = 0; j < chain.size(); ++j) cum[j + 1] = cum[j] + chain.steps[j].dt;
    std::vector<Cplx> polyline;
    std::vector<double> seg_times;
    polyline.emplace_back(chain.steps.empty() ? 0.0 : chain.steps[0].w0, 0.0);
    for (std::size_t k = 1; k <= chain.size(); k += c.trace_skip) {
        polyline.push_back(trace_tip(chain, k));
        seg_times.push_back(cum[k]);
    }
    return detect_hpi_polyline(polyline, seg_times, spec, c, chain.total_time());
}

CrossingRecord detect_Hpi(const DriverConfig& base, std::uint64_t path_index,
                          const EventSpec& spec, const EventConstants& c) {
    spec.validate();
    DriverConfig cfg = base;
    cfg.kappa = spec.kappa;
    cfg.rho_left.reset();
    cfg.rho_right.reset();
    PathSim sim(cfg, path_index, std::min(spec.y, 0.0));
    int mark = sim.add_mark(spec.x, spec.x);
    DriverPath rec_path;
    sim.record_into(&rec_path);
    const double horizon = c.horizon_mult * (spec.x - spec.y) * (spec.x - spec.y);

    const bool fast = (spec.variant == EventVariant::Hpi_odd && spec.n == 1);
    if (!fast) {
        while (sim.state().t < horizon) {
            if (sim.step(horizon - sim.state().t) <= 0.0) break;
        }
        return detect_Hpi(rec_path.chain, spec, c);
    }

    // n = 1: the event is the first visit to the semicircle; tips are only
    // needed while the mapped gap allows a hit.
    CrossingRecord rec;
    Cplx prev_tip(0.0, 0.0);
    bool have_prev = false;
    long last_tip_step = -1;
    while (sim.state().t < horizon) {
        if (sim.step(horizon - sim.state().t) <= 0.0) break;
        const FlowState& st = sim.state();
        const auto& m = st.marks[mark];
        const std::size_t k = rec_path.chain.size();
        double gap = m.image - st.w;
        if (m.swallowed || gap <= c.tip_guard * spec.epsilon * m.deriv) {
            if (static_cast<long>(k) - 1 != last_tip_step || !have_prev) {
                prev_tip = k >= 2 ? trace_tip(rec_path.chain, k - 1) : Cplx(0.0, 0.0);
                have_prev = true;
            }
            Cplx tip = trace_tip(rec_path.chain, k);
            // distance from the segment [prev_tip, tip] to the ball center
            Cplx d = tip - prev_tip;
            double len2 = std::norm(d);
            Cplx rel = Cplx(spec.x, 0.0) - prev_tip;
            double proj = len2 > 0.0
                              ? std::clamp((rel.real() * d.real() + rel.imag() * d.imag()) / len2,
                                           0.0, 1.0)
                              : 0.0;
            double dist = std::abs(rel - proj * d);
            prev_tip = tip;
            last_tip_step = static_cast<long>(k);
            if (dist <= spec.epsilon) {
                rec.success = true;
                rec.terminal = EventTerminal::target_reached;
                rec.legs_done = 1;
                rec.leg_times.push_back(st.t);
                rec.final_time = st.t;
                return rec;
            }
        }
        if (m.swallowed) break;  // kappa <= 4 in exact arithmetic never swallows
    }
    rec.success = false;
    rec.terminal = EventTerminal::horizon;
    rec.final_time = sim.state().t;
    return rec;
}

}  // namespace armlab
