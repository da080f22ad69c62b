#include "lorenz_lab/core_model.hpp"

#include <string>

#include "lorenz_lab/errors.hpp"

namespace lorenz_lab {

AlphaParams params_from_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    return {alpha, 25.0 * alpha + 10.0, 28.0 - 35.0 * alpha, (alpha + 8.0) / 3.0, 29.0 * alpha - 1.0};
}

RegulationTarget RegulationTarget::at(const AlphaParams& p, double x_r) {
    if (!std::isfinite(x_r)) {
        throw DomainError("x_r must be finite");
    }
    return {x_r, x_r * x_r / p.b};
}

RegulationTarget RegulationTarget::e_plus(const AlphaParams& p) {
    const double x_r = std::sqrt((8.0 + p.alpha) * (9.0 - 2.0 * p.alpha));
    // x_r^2 / b == 27 - 6 alpha; keep the closed form so E+ is exact.
    return {x_r, 27.0 - 6.0 * p.alpha};
}

EquilibriumSet equilibria(const AlphaParams& p) {
    const double c = std::sqrt((8.0 + p.alpha) * (9.0 - 2.0 * p.alpha));
    const double z = 27.0 - 6.0 * p.alpha;
    return {{0.0, 0.0, 0.0}, {c, c, z}, {-c, -c, z}};
}

double control_signal(const AlphaParams& p, const RegulationTarget& target, const State& d) {
    return -p.r * d.x + d.x * d.z - p.gamma * d.y - p.sigma * (d.y - target.x_r);
}

}  // namespace lorenz_lab
