#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "armlab/loewner.hpp"
#include "armlab/rng.hpp"

namespace armlab {

// ----------------------------------------------------------------------------
// Driving processes: W = sqrt(kappa) B for SLE_kappa, and the coupled SDE
// system for SLE_kappa(rho^L; rho^R) with force points x^L <= 0 <= x^R whose
// images evolve under the flow.  Euler-Maruyama with the adaptive dt policy;
// steps that would cross a singularity are refined by Brownian-bridge
// splitting so the law of W is unchanged.
// ----------------------------------------------------------------------------

struct DriverConfig {
    double kappa = 6.0;
    std::optional<double> rho_left;
    std::optional<double> rho_right;
    double x_left = 0.0;   // < 0 when rho_left present
    double x_right = 0.0;  // > 0 when rho_right present
    std::uint64_t seed = 0;
    StepPolicy dt;

    void validate() const;  // throws std::invalid_argument
};

enum class Termination { running, horizon_reached, force_point_hit_left, force_point_hit_right };

struct DriverPath {
    DiscretizedChain chain;
    std::vector<double> v_left;   // force-point image per step end (if present)
    std::vector<double> v_right;
    Termination termination = Termination::running;
};

// One SLE(kappa; rho) path co-evolving a FlowState.  Event marks can be
// added before stepping; all randomness comes from the per-path stream
// mix_seed(cfg.seed, path_index), independent of thread scheduling.
class PathSim {
  public:
    PathSim(const DriverConfig& cfg, std::uint64_t path_index, double y0 = 0.0);

    int add_mark(double x0, double hit_scale = -1.0);

    const FlowState& state() const { return st_; }
    FlowState& state() { return st_; }
    double kappa() const { return cfg_.kappa; }
    const StepPolicy& policy() const { return cfg_.dt; }

    int left_force_mark() const { return fp_left_; }
    int right_force_mark() const { return fp_right_; }

    // Advance by one adaptive step (at most dt_cap); returns the realized dt,
    // or 0 when the path has terminated at a force-point hit.
    double step(double dt_cap = 1e300);

    Termination termination() const { return term_; }
    bool terminated() const { return term_ != Termination::running; }

    // Optional recording sink for trace reconstruction and replay.
    void record_into(DriverPath* sink) { rec_ = sink; }

    long clamped_steps() const { return clamped_; }

  private:
    double drift() const;
    double propose_dt(double cap) const;

    DriverConfig cfg_;
    FlowState st_;
    GaussStream rng_;
    double s_ref_ = 1.0;  // initial mark scale; anchors the step-size cap
    int fp_left_ = -1;
    int fp_right_ = -1;
    Termination term_ = Termination::running;
    DriverPath* rec_ = nullptr;
    long clamped_ = 0;

    struct Pending {
        double dt;
        double b;  // Brownian increment over dt (unit variance rate)
    };
    std::vector<Pending> pending_;
};

// Sampled paths (recorded).  sample_sle ignores the rho fields.
DriverPath sample_sle(const DriverConfig& cfg, std::uint64_t path_index, double horizon);
DriverPath sample_sle_rho(const DriverConfig& cfg, std::uint64_t path_index, double horizon);

// ----------------------------------------------------------------------------
// The local martingale of the change of measure to SLE_kappa(rho^L; rho^R):
//   M_t = g'(xL)^{rL(rL+4-k)/(4k)} (W - g(xL))^{rL/k}
//       * g'(xR)^{rR(rR+4-k)/(4k)} (g(xR) - W)^{rR/k}
//       * (g(xR) - g(xL))^{rL rR/(2k)}
// ----------------------------------------------------------------------------

struct MartingaleSpec {
    double kappa = 6.0;
    std::optional<double> rho_left;
    std::optional<double> rho_right;
    double x_left = 0.0;
    double x_right = 0.0;

    static double deriv_exponent(double rho, double kappa) {
        return rho * (rho + 4.0 - kappa) / (4.0 * kappa);
    }
    static double dist_exponent(double rho, double kappa) { return rho / kappa; }
    double cross_exponent() const {
        return (rho_left && rho_right) ? (*rho_left) * (*rho_right) / (2.0 * kappa) : 0.0;
    }
};

// Evaluate M_t from tracked marks; mark ids < 0 mean "factor absent".
// Throws std::domain_error if a needed mark is swallowed (stopped martingale).
double martingale_value(const MartingaleSpec& spec, const FlowState& st,
                        int mark_left, int mark_right);

}  // namespace armlab
