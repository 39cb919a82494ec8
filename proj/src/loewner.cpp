#include "armlab/loewner.hpp"

#include <cmath>
#include <stdexcept>

namespace armlab {

bool FlowState::finite() const {
    if (!std::isfinite(t) || !std::isfinite(w) || !std::isfinite(o_right) ||
        !std::isfinite(y_left))
        return false;
    for (const auto& m : marks)
        if (!std::isfinite(m.image) || !std::isfinite(m.deriv)) return false;
    return true;
}

StepStatus advance_flow(FlowState& st, double w_next, double dt, const StepPolicy& pol) {
    const double w = st.w;
    for (auto& m : st.marks) {
        if (m.swallowed) continue;
        double gap = m.image - w;
        m.image += 2.0 * dt / gap;
        m.deriv -= 2.0 * m.deriv * dt / (gap * gap);
    }
    // Extreme-point processes: exact one-step slit images.  Plain Euler
    // cannot leave the touch state o_right = w (the true process lifts off
    // at rate 2 sqrt(dt)); the slit form solves the same ODE through the
    // step and handles touches.
    {
        double go = st.o_right - w;
        st.o_right = w + std::sqrt(go * go + 4.0 * dt);
        double gy = w - st.y_left;
        st.y_left = w - std::sqrt(gy * gy + 4.0 * dt);
    }
    st.t += dt;
    st.w = w_next;
    if (st.o_right < w_next) st.o_right = w_next;
    if (st.y_left > w_next) st.y_left = w_next;

    bool clamped = false;
    for (auto& m : st.marks) {
        if (m.swallowed) continue;
        double side = m.x0 >= 0.0 ? 1.0 : -1.0;
        double gap = side * (m.image - w_next);
        double thresh = pol.delta_hit * (m.hit_scale > 0.0 ? m.hit_scale : 1.0);
        if (m.repelled) {
            if (gap <= 0.0) {
                m.image = w_next + side * 0.25 * thresh;
                clamped = true;
            }
            continue;
        }
        if (gap <= thresh) {
            m.swallowed = true;
            m.swallow_time = st.t;
        }
    }
    if (!st.finite()) return StepStatus::nonfinite;
    return clamped ? StepStatus::repelled_clamped : StepStatus::ok;
}

double upsilon(const FlowState& st, int mark) {
    const auto& m = st.marks.at(mark);
    return (m.image - st.o_right) / m.deriv;
}

double j_observable(const FlowState& st, int mark) {
    const auto& m = st.marks.at(mark);
    return (m.image - st.o_right) / (m.image - st.w);
}

double conformal_radius_proxy(const FlowState& st, int mark) {
    const auto& m = st.marks.at(mark);
    if (m.swallowed) throw std::domain_error("conformal_radius_proxy: mark swallowed");
    return (m.image - st.o_right) / m.deriv;
}

double DiscretizedChain::total_time() const {
    double t = 0.0;
    for (const auto& s : steps) t += s.dt;
    return t;
}

Cplx sqrt_upper(Cplx z) {
    Cplx s = std::sqrt(z);
    return s.imag() >= 0.0 ? s : -s;
}

Cplx slit_forward(Cplx z, double wbar, double dt) {
    Cplx h = z - wbar;
    if (h.imag() == 0.0) {
        // real points keep their side of the slit base
        double x = h.real();
        double v = std::sqrt(x * x + 4.0 * dt);
        return Cplx(wbar + (x >= 0.0 ? v : -v), 0.0);
    }
    return wbar + sqrt_upper(h * h + 4.0 * dt);
}

Cplx slit_inverse(Cplx w, double wbar, double dt) {
    Cplx h = w - wbar;
    return wbar + sqrt_upper(h * h - 4.0 * dt);
}

Cplx trace_tip(const DiscretizedChain& chain, std::size_t k) {
    if (k > chain.size()) throw std::out_of_range("trace_tip: step index out of range");
    if (k == 0) return Cplx(chain.steps.empty() ? 0.0 : chain.steps[0].w0, 0.0);
    const auto& sk = chain.steps[k - 1];
    Cplx z(sk.w0, 2.0 * std::sqrt(sk.dt));
    for (std::size_t j = k - 1; j-- > 0;) {
        z = slit_inverse(z, chain.steps[j].w0, chain.steps[j].dt);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.imag() < -1e-9)
            throw std::runtime_error("trace_tip: branch failure, step too coarse");
        if (z.imag() < 0.0) z = Cplx(z.real(), 0.0);
    }
    return z;
}

Cplx forward_map(const DiscretizedChain& chain, Cplx z, std::size_t k) {
    if (k > chain.size()) k = chain.size();
    for (std::size_t j = 0; j < k; ++j)
        z = slit_forward(z, chain.steps[j].w0, chain.steps[j].dt);
    return z;
}

Cplx forward_map_deriv(const DiscretizedChain& chain, Cplx z, std::size_t k) {
    if (k > chain.size()) k = chain.size();
    Cplx d(1.0, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        Cplx h = z - chain.steps[j].w0;
        Cplx s = sqrt_upper(h * h + 4.0 * chain.steps[j].dt);
        if (h.imag() == 0.0) {
            double x = h.real();
            double v = std::sqrt(x * x + 4.0 * chain.steps[j].dt);
            s = Cplx(x >= 0.0 ? v : -v, 0.0);
        }
        d *= h / s;
        z = chain.steps[j].w0 + s;
    }
    return d;
}

double hcap_estimate(const DiscretizedChain& chain, double big_r) {
    if (chain.steps.empty()) return 0.0;
    double t = chain.total_time();
    if (big_r <= 0.0) big_r = 1e3 * std::sqrt(std::max(t, 1e-12));
    Cplx z(0.0, big_r);
    Cplx g = forward_map(chain, z);
    return ((g - z) * z).real();
}

}  // namespace armlab
