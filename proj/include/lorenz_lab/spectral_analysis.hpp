#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "lorenz_lab/core_model.hpp"

namespace lorenz_lab {

using cplx = std::complex<double>;

/// W(lambda) = P(lambda) + Q(lambda) e^{-lambda tau} for the linearization at
/// the regulation target, with
///   P = lambda^3 + a2 lambda^2 + a1 lambda + a0,
///   Q = b2 lambda^2 + b1 lambda + b0.
struct CharQuasiPoly {
    double a0 = 0, a1 = 0, a2 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
    double k1 = 0, k2 = 0;
    AlphaParams params{};
    double x_r = 0;

    [[nodiscard]] cplx P(cplx l) const { return ((l + a2) * l + a1) * l + a0; }
    [[nodiscard]] cplx Q(cplx l) const { return (b2 * l + b1) * l + b0; }
    [[nodiscard]] cplx dP(cplx l) const { return (3.0 * l + 2.0 * a2) * l + a1; }
    [[nodiscard]] cplx dQ(cplx l) const { return 2.0 * b2 * l + b1; }
    /// 1 + largest coefficient magnitude; reference size for residual tolerances.
    [[nodiscard]] double scale() const;
};

CharQuasiPoly build_char_poly(const AlphaParams& p, const RegulationTarget& target);

cplx eval_W(const CharQuasiPoly& poly, cplx lambda, double tau);
/// dW/dlambda = P' + (Q' - tau Q) e^{-lambda tau}.
cplx eval_dW(const CharQuasiPoly& poly, cplx lambda, double tau);

/// Routh-Hurwitz data for the undelayed cubic
/// lambda^3 + (b + 2 sigma) lambda^2 + (2 sigma b + sigma^2) lambda + sigma^2 b.
struct RouthHurwitz {
    bool stable = false;
    double c2 = 0, c1 = 0, c0 = 0;
    /// c2 c1 - c0, equal to 2 sigma (sigma + b)^2.
    double hurwitz_margin = 0;
    /// (b + 2 sigma)(2 sigma b + sigma^2) - sigma^2 b - 2 sigma (sigma + b)^2.
    double identity_residual = 0;
};

RouthHurwitz routh_hurwitz_tau0(const CharQuasiPoly& poly);

/// F(x) = |P(i nu)|^2 - |Q(i nu)|^2 with x = nu^2.
struct AuxCubic {
    double c2 = 0, c1 = 0, c0 = 0;
    double delta = 0;
    /// Critical points (-c2 +/- sqrt(delta)) / 3, present iff delta > 0.
    std::optional<double> x_star;
    std::optional<double> x_star2;

    [[nodiscard]] double operator()(double x) const { return ((x + c2) * x + c1) * x + c0; }
    [[nodiscard]] double derivative(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }
    [[nodiscard]] double scale() const;
};

AuxCubic build_aux_cubic(const CharQuasiPoly& poly);

/// Sufficient conditions for stability for all delays, and the two
/// alternatives guaranteeing an imaginary-axis crossing.
struct HopfConditions {
    bool stable_for_all_tau = false;  ///< delta <= 0 and c0 >= 0
    bool c0_negative = false;         ///< c0 < 0
    bool critical_point_test = false; ///< delta > 0, x* > 0 and F(x*) < 0
};

HopfConditions hopf_conditions(const AuxCubic& aux);

struct CubicRoot {
    double x;
    bool simple;
};

/// Positive real roots of F, ascending. Companion-matrix eigenvalues polished
/// by Newton to |F| < 1e-9 max(1, |c0|).
std::vector<CubicRoot> cubic_positive_roots(const AuxCubic& aux);

/// tau_n = (theta + 2 n pi) / nu, n = 0..n_max, where theta in [0, 2 pi) is
/// the angle with e^{-i theta} = -P(i nu) / Q(i nu). Non-positive entries are
/// dropped. Throws DegenerateError if Q(i nu) = 0.
std::vector<double> delay_sequence(const CharQuasiPoly& poly, double nu, int n_max);

enum class Crossing { left_to_right, right_to_left };

struct ImaginaryRoot {
    double x = 0;
    double nu = 0;
    double fprime = 0;
    Crossing direction = Crossing::left_to_right;
    bool simple = true;
    std::vector<double> tau_seq;
};

struct SwitchEvent {
    double tau = 0;
    Crossing crossing = Crossing::left_to_right;
    double nu = 0;
    /// Number of characteristic roots in Re lambda > 0 just after this delay.
    int unstable_roots_after = 0;
};

struct SwitchAnalysis {
    std::vector<ImaginaryRoot> positive_roots;
    std::optional<double> tau_c;
    std::optional<double> nu0;
    std::vector<SwitchEvent> schedule;
    bool eventually_unstable = false;
    bool stable_for_all_tau = false;
};

struct SwitchOptions {
    /// Delay sequences are listed up to this delay.
    double tau_horizon = 2.0;
};

/// Full delay analysis at the target. Throws DomainError if the undelayed
/// closed loop is not Routh-Hurwitz stable and ContradictionError if the
/// first crossing is stabilizing.
SwitchAnalysis critical_delay(const AlphaParams& p, const RegulationTarget& target, const SwitchOptions& opts = {});
SwitchAnalysis critical_delay(const CharQuasiPoly& poly, const SwitchOptions& opts = {});

struct Transversality {
    double value = 0;
    int sign = 0;
    bool degenerate = false;
};

/// F'(nu0^2); positive certifies a destabilizing crossing.
Transversality transversality(const AuxCubic& aux, double nu0);

/// Newton iteration on W(., tau). Converges to |W| < 1e-10 scale within 50
/// iterations or throws RootTrackingError.
cplx newton_root(const CharQuasiPoly& poly, double tau, cplx guess);

/// d lambda / d tau = lambda Q e^{-lambda tau} / (P' + (Q' - tau Q) e^{-lambda tau}).
cplx root_velocity(const CharQuasiPoly& poly, double tau, cplx lambda);

}  // namespace lorenz_lab
