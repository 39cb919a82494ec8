#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace armlab {

using Cplx = std::complex<double>;

// ----------------------------------------------------------------------------
// Chordal Loewner flow for boundary marked points.
//
// The flow integrates dX = 2 dt / (X - W) for each unswallowed mark together
// with the derivative ODE dD = -2 D dt / (X - W)^2, and maintains the two
// reflected extreme-point processes:
//   o_right: image of the rightmost hull point on R, o_right >= w,
//   y_left:  image of y (or of the leftmost hull point once swallowed),
//            y_left <= w.
// Time is the half-plane-capacity parametrization, hcap(K_t) = 2t.
// ----------------------------------------------------------------------------

struct MarkedPoint {
    double x0 = 0.0;        // initial boundary position
    double image = 0.0;     // g_t(x0)
    double deriv = 1.0;     // g_t'(x0)
    bool swallowed = false;
    double swallow_time = -1.0;
    double hit_scale = 0.0;  // reference scale for the hit threshold
    bool repelled = false;   // analytically non-hitting; never flagged, gap kept positive
};

struct StepPolicy {
    double dt_max = 1e-3;
    double c_step = 0.01;
    double delta_hit = 1e-6;
};

struct FlowState {
    double t = 0.0;
    double w = 0.0;
    std::vector<MarkedPoint> marks;
    double o_right = 0.0;
    double y_left = 0.0;

    int add_mark(double x0) {
        MarkedPoint m;
        m.x0 = x0;
        m.image = x0;
        m.hit_scale = std::abs(x0);
        marks.push_back(m);
        return static_cast<int>(marks.size()) - 1;
    }
    bool finite() const;
};

enum class StepStatus { ok, nonfinite, repelled_clamped };

// One explicit Euler step to driving value w_next over dt > 0.  Marks whose
// gap to the driver reaches delta_hit * hit_scale (or overshoots to the wrong
// side) are flagged swallowed.  Returns nonfinite on step-size failure; the
// caller must refine dt.
StepStatus advance_flow(FlowState& st, double w_next, double dt, const StepPolicy& pol);

// Upsilon_t = (image - o_right)/deriv and J_t = (image - o_right)/(image - w)
// for a right mark.  Upsilon is nonincreasing in t; 0 < J <= 1.
double upsilon(const FlowState& st, int mark);
double j_observable(const FlowState& st, int mark);

// Conformal radius proxy (g_t(x) - O_t)/g_t'(x).  Throws std::domain_error
// for a swallowed mark.
double conformal_radius_proxy(const FlowState& st, int mark);

// ----------------------------------------------------------------------------
// Discretized driving path and hull reconstruction.
// ----------------------------------------------------------------------------

struct ChainStep {
    double dt = 0.0;
    double w0 = 0.0;  // driving value at the step start
    double w1 = 0.0;  // driving value at the step end
};

struct DiscretizedChain {
    std::vector<ChainStep> steps;
    double total_time() const;
    void push(double dt, double w0, double w1) { steps.push_back({dt, w0, w1}); }
    std::size_t size() const { return steps.size(); }
};

// Square root with image in the closed upper half-plane.
Cplx sqrt_upper(Cplx z);

// Elementary slit maps for one step of size dt at driving value wbar:
// forward g (removes the slit), inverse f (grows it back).
Cplx slit_forward(Cplx z, double wbar, double dt);
Cplx slit_inverse(Cplx w, double wbar, double dt);

// Trace tip eta(t_k) by composing the k inverse elementary maps applied to
// the tip seed W_k + 2i sqrt(dt_k).  k is 1-based; k == 0 gives the start
// point.  Throws std::runtime_error on branch failure (step too coarse).
Cplx trace_tip(const DiscretizedChain& chain, std::size_t k);

// Forward map of a point through the first k elementary slit maps (the whole
// chain when k == npos).  Points inside the hull come out non-finite or on R.
Cplx forward_map(const DiscretizedChain& chain, Cplx z,
                 std::size_t k = static_cast<std::size_t>(-1));
Cplx forward_map_deriv(const DiscretizedChain& chain, Cplx z,
                       std::size_t k = static_cast<std::size_t>(-1));

// hcap estimate from the expansion g_K(z) = z + hcap/z + ... at z = iR;
// equals 2 * total_time up to O(1/R) relative error.
double hcap_estimate(const DiscretizedChain& chain, double big_r = 0.0);

}  // namespace armlab
