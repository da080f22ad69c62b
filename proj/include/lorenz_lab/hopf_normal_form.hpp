#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lorenz_lab/core_model.hpp"
#include "lorenz_lab/spectral_analysis.hpp"

namespace lorenz_lab {

using cvec3 = Eigen::Vector3cd;

/// Linear part of the closed loop translated to the target: the current
/// state enters through B1, the delayed state through B2 (second row only).
struct LinearizationMatrices {
    Eigen::Matrix3d B1;
    Eigen::Matrix3d B2;
};

LinearizationMatrices build_B_matrices(const AlphaParams& p, const RegulationTarget& target);

/// A purely imaginary characteristic root i nu0 at delay tau_c. All
/// center-manifold quantities live in time rescaled by tau, where the
/// critical eigenvalue is i omega with omega = tau_c nu0.
struct HopfPoint {
    AlphaParams params;
    RegulationTarget target;
    double tau_c;
    double nu0;

    [[nodiscard]] double omega() const { return tau_c * nu0; }
};

/// Hopf point from critical_delay; DegenerateError if no crossing exists.
HopfPoint hopf_point(const AlphaParams& p, const RegulationTarget& target);

/// q = (1, q2, q3): eigenvector of the generator for i omega. Throws
/// ConsistencyError if (tau_c, nu0) is not a characteristic root.
cvec3 eigenvector_q(const HopfPoint& hp);

/// (1, q2*, q3*): adjoint eigenvector for -i omega, without the D factor.
cvec3 eigenvector_qstar(const HopfPoint& hp);

/// Normalization making <q*, q> = 1 for q*(s) = D (1, q2*, q3*) e^{i omega s}.
cplx normalization_D(const HopfPoint& hp, const cvec3& q, const cvec3& qstar);

/// Function v e^{i rate theta} on [-1, 0] (or [0, 1] for adjoint functions).
struct ExpMode {
    cvec3 v;
    double rate;
};

/// <psi, phi> = conj(psi(0)) . phi(0) + tau_c int_{-1}^{0} conj(psi(xi + 1)) B2 phi(xi) dxi,
/// evaluated in closed form for exponential modes.
cplx bilinear_form(const LinearizationMatrices& m, double tau_c, const ExpMode& psi, const ExpMode& phi);

struct QuadraticCoefficients {
    cplx g20;
    cplx g11;
    cplx g02;
};

QuadraticCoefficients g_low_order(const cvec3& q, const cvec3& qstar, cplx d_norm, double tau_c, double nu0);

/// Constant parts of W20 and W11 on the center manifold.
struct CenterManifoldConstants {
    cvec3 E1;
    cvec3 E2;  ///< real-valued
    double cond_G = 0;
    double cond_Gprime = 0;
};

/// Throws ResonanceError when G or G' has condition number above 1e10.
CenterManifoldConstants solve_E1_E2(const HopfPoint& hp, const cvec3& q);

struct WVectors {
    cvec3 w20;
    cvec3 w11;
};

WVectors W_vectors(const cvec3& q, const QuadraticCoefficients& g, const CenterManifoldConstants& e, double tau_c,
                   double nu0, double theta);

cplx g21(const cvec3& q, const cvec3& qstar, cplx d_norm, const QuadraticCoefficients& g,
         const CenterManifoldConstants& e, double tau_c, double nu0);

enum class HopfDirection { supercritical, subcritical };
enum class OrbitStability { stable, unstable };

struct NormalForm {
    double tau_c = 0;
    double nu0 = 0;
    cvec3 q;
    cvec3 qstar;
    cplx d_norm;
    cplx g20, g11, g02, g21;
    cvec3 E1, E2;
    double cond_G = 0;
    cplx c1;
    cplx lambda_prime;
    double mu2 = 0;
    double beta2 = 0;
    double t2 = 0;
    HopfDirection direction = HopfDirection::supercritical;
    OrbitStability orbit_stability = OrbitStability::stable;
    /// Oscillation period at onset in original time units, 2 pi / nu0.
    double period = 0;
    /// Predicted (half peak-to-trough x amplitude)^2 per unit (tau - tau_c): 4 tau_c / mu2.
    double amplitude_sq_slope = 0;
};

/// Full normal-form chain at the Hopf point. Throws ContradictionError if
/// Re lambda'(tau_c) <= 0.
NormalForm classify(const HopfPoint& hp);

/// The same chain for an arbitrary scaling of the eigenvectors: q(0) = q and
/// q*(0) = D qstar with D fixed by <q*, q> = 1. The quadratic and cubic
/// terms are taken from controlled_rhs by polarization instead of the
/// component formulas used by classify(). Results agree with classify() up
/// to the gauge factors of g20, g11, g02; c1 is gauge invariant.
NormalForm classify_in_basis(const HopfPoint& hp, const cvec3& q, const cvec3& qstar);

const char* to_string(HopfDirection d);
const char* to_string(OrbitStability s);

}  // namespace lorenz_lab
