#include "lorenz_lab/dde_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "lorenz_lab/errors.hpp"

namespace lorenz_lab {

namespace {

void check_divergence(const State& s, double t) {
    if (!is_finite(s) || norm(s) > kDivergenceNorm) {
        throw DivergenceError("state norm exceeded the divergence guard at t = " + std::to_string(t), t);
    }
}

std::size_t step_count(double h, double t_end) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigurationError("step h must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConfigurationError("t_end must be positive");
    }
    return static_cast<std::size_t>(std::max(1.0, std::round(t_end / h)));
}

Trajectory make_trajectory(std::size_t steps, const TrajectoryMeta& meta) {
    Trajectory traj;
    traj.meta = meta;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    return traj;
}

}  // namespace

std::size_t steps_per_delay(double tau, double h) {
    if (!(tau > 0.0) || !(h > 0.0) || !std::isfinite(tau) || !std::isfinite(h)) {
        throw ConfigurationError("tau and h must be positive");
    }
    const double ratio = tau / h;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) {
        throw ConfigurationError("step h = " + std::to_string(h) + " does not divide tau = " + std::to_string(tau));
    }
    return static_cast<std::size_t>(n);
}

State hermite(const State& y0, const State& f0, const State& y1, const State& f1, double h, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

HistoryBuffer::HistoryBuffer(double tau, double h, const State& initial)
    : h_(h), n_(steps_per_delay(tau, h)), initial_(initial), states_(n_ + 1), derivs_(n_ + 1) {}

void HistoryBuffer::push(const State& state, const State& derivative) {
    const std::size_t i = static_cast<std::size_t>(next_) % states_.size();
    states_[i] = state;
    derivs_[i] = derivative;
    ++next_;
}

std::size_t HistoryBuffer::slot(long k) const {
    const long oldest = next_ - static_cast<long>(states_.size());
    if (k >= next_ || k < oldest) {
        throw ConfigurationError("history node " + std::to_string(k) + " is outside the buffer");
    }
    return static_cast<std::size_t>(k) % states_.size();
}

State HistoryBuffer::state_at(long k) const {
    if (k <= 0) {
        return initial_;
    }
    return states_[slot(k)];
}

State HistoryBuffer::interpolate(long k, double s) const {
    if (k + 1 <= 0) {
        return initial_;
    }
    const std::size_t a = slot(k);
    const std::size_t b = slot(k + 1);
    return hermite(states_[a], derivs_[a], states_[b], derivs_[b], h_, s);
}

Trajectory integrate_dde(const AlphaParams& p, const RegulationTarget& target, double tau, const State& initial,
                         double h, double t_end) {
    if (!is_finite(initial)) {
        throw ConfigurationError("initial state must be finite");
    }
    HistoryBuffer history(tau, h, initial);
    const long n = static_cast<long>(history.delay_steps());
    const std::size_t steps = step_count(h, t_end);

    auto f = [&](const State& now, const State& delayed) { return controlled_rhs(p, target, now, delayed); };

    Trajectory traj = make_trajectory(steps, {p.alpha, tau, h, target.x_r});
    State x = initial;
    traj.times.push_back(0.0);
    traj.states.push_back(x);

    for (std::size_t k = 0; k < steps; ++k) {
        const long j = static_cast<long>(k) - n;
        const State k1 = f(x, history.state_at(j));
        history.push(x, k1);
        const State mid = history.interpolate(j, 0.5);
        const State k2 = f(x + (0.5 * h) * k1, mid);
        const State k3 = f(x + (0.5 * h) * k2, mid);
        const State k4 = f(x + h * k3, history.state_at(j + 1));
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t = static_cast<double>(k + 1) * h;
        check_divergence(x, t);
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

Trajectory integrate_ode(const AlphaParams& p, const RegulationTarget& target, const State& initial, double h,
                         double t_end, VectorField field) {
    if (!is_finite(initial)) {
        throw ConfigurationError("initial state must be finite");
    }
    const std::size_t steps = step_count(h, t_end);
    auto f = [&](const State& s) {
        return field == VectorField::closed_loop ? controlled_rhs(p, target, s, s) : uncontrolled_rhs(p, s);
    };

    Trajectory traj = make_trajectory(steps, {p.alpha, 0.0, h, target.x_r});
    State x = initial;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (std::size_t k = 0; k < steps; ++k) {
        const State k1 = f(x);
        const State k2 = f(x + (0.5 * h) * k1);
        const State k3 = f(x + (0.5 * h) * k2);
        const State k4 = f(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t = static_cast<double>(k + 1) * h;
        check_divergence(x, t);
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

namespace {

double half_range(const std::vector<State>& s, std::size_t begin, std::size_t end) {
    if (begin >= end) {
        return 0.0;
    }
    auto [lo, hi] = std::minmax_element(s.begin() + static_cast<long>(begin), s.begin() + static_cast<long>(end),
                                        [](const State& a, const State& b) { return a.x < b.x; });
    return 0.5 * (hi->x - lo->x);
}

}  // namespace

OscillationMetrics oscillation_metrics(const Trajectory& traj, const RegulationTarget& target, double tail_fraction,
                                       double tol) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw DomainError("tail_fraction must lie in (0, 1]");
    }
    const std::size_t n = traj.states.size();
    if (n < 100 || traj.times.size() != n) {
        throw InsufficientDataError("oscillation metrics need at least 100 samples, got " + std::to_string(n));
    }
    const auto tail = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
    const std::size_t start = n - std::min(tail, n);
    const auto& s = traj.states;

    OscillationMetrics m;
    m.final_distance_to_target = norm(s.back() - target.point());
    m.amplitude = half_range(s, start, n);

    const std::size_t split = start + (n - start) / 2;
    const double a1 = half_range(s, start, split);
    const double a2 = half_range(s, split, n);
    const double amax = std::max(a1, a2);
    m.amplitude_drift = amax > 0.0 ? std::abs(a2 - a1) / amax : 0.0;

    // Maxima above the tail midline, refined by a parabola through three samples.
    double lo = s[start].x;
    double hi = s[start].x;
    for (std::size_t i = start; i < n; ++i) {
        lo = std::min(lo, s[i].x);
        hi = std::max(hi, s[i].x);
    }
    const double midline = 0.5 * (lo + hi);
    const double noise_floor = 1e-12 * (1.0 + std::abs(midline));
    std::vector<double> peak_times;
    if (m.amplitude > noise_floor) {
        for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < n; ++i) {
            const double ym = s[i - 1].x;
            const double y0 = s[i].x;
            const double yp = s[i + 1].x;
            if (y0 > ym && y0 >= yp && y0 > midline) {
                const double curvature = ym - 2.0 * y0 + yp;
                const double shift = curvature != 0.0 ? 0.5 * (ym - yp) / curvature : 0.0;
                const double h = traj.times[i + 1] - traj.times[i];
                peak_times.push_back(traj.times[i] + shift * h);
            }
        }
    }
    m.peak_count = peak_times.size();
    if (peak_times.size() >= 3) {
        m.period = (peak_times.back() - peak_times.front()) / static_cast<double>(peak_times.size() - 1);
    }
    m.converged = m.final_distance_to_target < tol && m.amplitude < tol;
    m.oscillating = !m.converged && m.peak_count >= 3 && m.amplitude_drift < kStabilizedDrift;
    return m;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,x,y,z\n";
    char buf[128];
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const State& s = traj.states[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.times[i], s.x, s.y, s.z);
        out << buf;
    }
}

}  // namespace lorenz_lab
