#pragma once

#include <cstdint>
#include <vector>

#include "armlab/driver.hpp"
#include "armlab/geometry.hpp"
#include "armlab/loewner.hpp"

namespace armlab {

// ----------------------------------------------------------------------------
// Crossing events between the ball B(x, eps) and the half-infinite line
// (-inf, y] (kappa > 4), or between the semicircle and the half-strip
// boundary (kappa <= 4, trace mode).
//
// Leg order per variant (j = arm index):
//   H_odd      H_{2n-1}:  ball line ball ... ball   (2n-1 legs, ends ball)
//   Hhat_even  Hhat_{2n}: ball line ... ball line   (2n legs, ends line)
//   H_even     H_{2n}:    line ball ... line ball   (2n legs, ends ball)
//   Hhat_odd   Hhat_{2n-1}: line ball ... line      (2n-1 legs, ends line)
//   Hpi_odd    Hpi_{2n-1}: (semicircle, strip) well-oriented crossings
//   Hpi_even   Hpi_{2n}:   (strip, semicircle) well-oriented crossings
// Success = all legs complete before x is swallowed (time T) / the horizon.
// ----------------------------------------------------------------------------

enum class EventVariant { H_odd, H_even, Hhat_even, Hhat_odd, Hpi_odd, Hpi_even };

enum class LegKind { ball, line };

struct EventSpec {
    EventVariant variant = EventVariant::H_odd;
    int n = 1;
    double epsilon = 0.125;
    double x = 1.0;
    double y = 0.0;
    double kappa = 6.0;

    void validate() const;  // throws std::invalid_argument
    int total_legs() const;
    std::vector<LegKind> legs() const;
    bool trace_mode() const {
        return variant == EventVariant::Hpi_odd || variant == EventVariant::Hpi_even;
    }
};

struct EventConstants {
    double c_ball = 4.0;         // subsequent ball-leg threshold multiplier
    double c_renew_up = 8.0;     // mapped-ball containment constant (at x+3eps)
    double c_renew_low = 0.25;   // Koebe 1/4 lower mode
    double horizon_mult = 50.0;  // horizon = horizon_mult * (x-y)^2
    double strip_trunc_mult = 10.0;
    double tip_guard = 64.0;     // evaluate tips while gap <= guard*eps*deriv
    int trace_skip = 1;
    int circle_segments = 128;
};

enum class EventTerminal { target_reached, swallowed_x, horizon };

struct CrossingRecord {
    bool success = false;
    std::vector<double> leg_times;
    EventTerminal terminal = EventTerminal::horizon;
    int legs_done = 0;
    double final_time = 0.0;
};

// Leg-threshold state machine on tracked observables (kappa > 4).
class EventTracker {
  public:
    EventTracker(const EventSpec& spec, const EventConstants& c, const StepPolicy& pol);
    // Returns true once the event is decided; record() then holds the result.
    bool update(const FlowState& st, int mark_x);
    const CrossingRecord& record() const { return rec_; }
    CrossingRecord& record() { return rec_; }

  private:
    EventSpec spec_;
    EventConstants c_;
    StepPolicy pol_;
    std::vector<LegKind> legs_;
    std::size_t leg_idx_ = 0;
    double line_scale_ = 0.0;
    CrossingRecord rec_;
};

// Threshold-mode detection on a fresh SLE_kappa path (driver config supplies
// seed and dt policy; kappa is taken from the spec).
CrossingRecord detect_crossings_gt4(const DriverConfig& base, std::uint64_t path_index,
                                    const EventSpec& spec, const EventConstants& c);

// Same detection driven on an existing simulation (importance sampling runs
// an SLE_kappa(rho) driver through the same tracker).
CrossingRecord detect_crossings_gt4(PathSim& sim, int mark_x, const EventSpec& spec,
                                    const EventConstants& c);

// Replay over a recorded driving path.
CrossingRecord detect_crossings_gt4(const DriverPath& path, const EventSpec& spec,
                                    const EventConstants& c);

// Renewed (eps', x', y') under the centered map g_sigma - W_sigma after a
// completed leg: eps' = eps*deriv*c_renew, x' = image - w, and y' = 0 after
// a line leg, y' = y_left - w after a ball leg.
struct RenewedParams {
    double epsilon, x, y;
};
RenewedParams renewal_leg(const EventSpec& spec, const FlowState& st, int mark_x,
                          LegKind completed, double c_renew);

// Trace-based detection (kappa <= 4): reconstructs the tip polyline and
// counts well-oriented crossings against the semicircle and half-strip
// crosscuts.  The streaming overload has a fast path for Hpi_odd n = 1.
CrossingRecord detect_Hpi(const DriverConfig& base, std::uint64_t path_index,
                          const EventSpec& spec, const EventConstants& c);
CrossingRecord detect_Hpi(const DiscretizedChain& chain, const EventSpec& spec,
                          const EventConstants& c);

}  // namespace armlab
