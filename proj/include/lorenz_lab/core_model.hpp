#pragma once

#include <cmath>

namespace lorenz_lab {

/// Three-component vector used for states and derivatives. Templated on the
/// scalar so the same vector fields can be evaluated on complex arguments.
template <typename T>
struct Triple {
    T x{};
    T y{};
    T z{};

    Triple& operator+=(const Triple& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Triple& operator-=(const Triple& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    friend Triple operator+(Triple a, const Triple& b) { return a += b; }
    friend Triple operator-(Triple a, const Triple& b) { return a -= b; }
    friend Triple operator*(double s, const Triple& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Triple operator*(const Triple& a, double s) { return s * a; }
    friend bool operator==(const Triple&, const Triple&) = default;
};

using State = Triple<double>;

inline double norm(const State& s) { return std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z); }
inline bool is_finite(const State& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
}

/// One member of the generalized Lorenz family. alpha = 0 is Lorenz,
/// alpha = 0.8 is Lü, alpha = 1 is Chen.
struct AlphaParams {
    double alpha;
    double sigma;
    double r;
    double b;
    double gamma;
};

/// Throws DomainError unless 0 <= alpha <= 1.
AlphaParams params_from_alpha(double alpha);

/// Point (x_r, x_r, z_star) the controller regulates to; z_star = x_r^2 / b.
struct RegulationTarget {
    double x_r;
    double z_star;

    [[nodiscard]] State point() const { return {x_r, x_r, z_star}; }

    static RegulationTarget at(const AlphaParams& p, double x_r);
    /// The nontrivial equilibrium E+ of the uncontrolled system.
    static RegulationTarget e_plus(const AlphaParams& p);
};

struct EquilibriumSet {
    State e0;
    State e_plus;
    State e_minus;
};

EquilibriumSet equilibria(const AlphaParams& p);

/// Open-loop generalized Lorenz field.
template <typename T>
Triple<T> uncontrolled_rhs(const AlphaParams& p, const Triple<T>& s) {
    return {p.sigma * (s.y - s.x),
            p.r * s.x - s.x * s.z + p.gamma * s.y,
            s.x * s.y - p.b * s.z};
}

/// Closed-loop field with the delayed nonlinear feedback acting on the y
/// equation. `delayed` is the state at t - tau.
template <typename T>
Triple<T> controlled_rhs(const AlphaParams& p, const RegulationTarget& target, const Triple<T>& now,
                         const Triple<T>& delayed) {
    const auto& d = delayed;
    return {p.sigma * (now.y - now.x),
            p.r * (now.x - d.x) - (now.x * now.z - d.x * d.z) + p.gamma * (now.y - d.y) -
                p.sigma * (d.y - target.x_r),
            now.x * now.y - p.b * now.z};
}

/// u = -r x_d + x_d z_d - gamma y_d - sigma (y_d - x_r).
double control_signal(const AlphaParams& p, const RegulationTarget& target, const State& delayed);

}  // namespace lorenz_lab
