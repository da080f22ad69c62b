#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "lorenz_lab/core_model.hpp"

namespace lorenz_lab {

/// Norm above which an integration is declared divergent.
inline constexpr double kDivergenceNorm = 1e12;

/// Returns N = tau / h, throwing ConfigurationError unless N is a positive
/// integer (to a relative tolerance of 1e-9).
std::size_t steps_per_delay(double tau, double h);

/// Cubic Hermite interpolant on [t0, t0 + h] at t0 + s*h, s in [0, 1].
State hermite(const State& y0, const State& f0, const State& y1, const State& f1, double h, double s);

/// Ring of the last N+1 grid nodes (state and stored derivative) covering
/// [t - tau, t]. Node indices are absolute grid indices k (t_k = k h);
/// indices <= 0 resolve to the constant initial history.
class HistoryBuffer {
public:
    HistoryBuffer(double tau, double h, const State& initial);

    [[nodiscard]] std::size_t delay_steps() const noexcept { return n_; }
    [[nodiscard]] double step() const noexcept { return h_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return states_.size(); }

    /// Appends node k = pushed count.
    void push(const State& state, const State& derivative);

    /// State at grid node k (k may be <= 0, meaning history).
    [[nodiscard]] State state_at(long k) const;

    /// Value at t_k + s h for s in [0, 1].
    [[nodiscard]] State interpolate(long k, double s) const;

private:
    [[nodiscard]] std::size_t slot(long k) const;

    double h_;
    std::size_t n_;
    State initial_;
    std::vector<State> states_;
    std::vector<State> derivs_;
    long next_ = 0;
};

struct TrajectoryMeta {
    double alpha = 0.0;
    double tau = 0.0;
    double h = 0.0;
    double x_r = 0.0;
};

/// Uniformly sampled solution, times[0] = 0.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    TrajectoryMeta meta;
};

enum class VectorField { closed_loop, open_loop };

/// Fixed-step RK4 / method of steps for the delayed closed loop with
/// constant history equal to `initial` on [-tau, 0]. h must divide tau.
Trajectory integrate_dde(const AlphaParams& p, const RegulationTarget& target, double tau, const State& initial,
                         double h, double t_end);

/// RK4 for the undelayed closed loop (tau = 0) or the open-loop system.
Trajectory integrate_ode(const AlphaParams& p, const RegulationTarget& target, const State& initial, double h,
                         double t_end, VectorField field = VectorField::closed_loop);

struct OscillationMetrics {
    bool converged = false;
    bool oscillating = false;
    double final_distance_to_target = 0.0;
    /// Half peak-to-trough of x over the tail window.
    double amplitude = 0.0;
    /// Mean spacing of x maxima in the tail window; 0 with fewer than 3 peaks.
    double period = 0.0;
    std::size_t peak_count = 0;
    /// |a2 - a1| / max(a1, a2) between the two halves of the tail window.
    double amplitude_drift = 0.0;
};

inline constexpr double kDefaultConvergenceTol = 1e-3;
inline constexpr double kStabilizedDrift = 0.05;

OscillationMetrics oscillation_metrics(const Trajectory& traj, const RegulationTarget& target, double tail_fraction,
                                       double tol = kDefaultConvergenceTol);

/// CSV with header `t,x,y,z`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace lorenz_lab
