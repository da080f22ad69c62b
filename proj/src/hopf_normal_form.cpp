#include "lorenz_lab/hopf_normal_form.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lorenz_lab/errors.hpp"

namespace lorenz_lab {

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kMaxCondition = 1e10;

double condition_number(const Eigen::Matrix3cd& m) {
    const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(m);
    const auto& s = svd.singularValues();
    return s(2) > 0.0 ? s(0) / s(2) : std::numeric_limits<double>::infinity();
}

/// r - z*: coefficient of x in the linearized y equation.
double coupling(const HopfPoint& hp) { return hp.params.r - hp.target.z_star; }

}  // namespace

LinearizationMatrices build_B_matrices(const AlphaParams& p, const RegulationTarget& target) {
    const double c = p.r - target.z_star;
    const double xr = target.x_r;
    LinearizationMatrices m;
    m.B1 << -p.sigma, p.sigma, 0.0,  //
        c, p.gamma, -xr,             //
        xr, xr, -p.b;
    m.B2 << 0.0, 0.0, 0.0,                //
        -c, -(p.gamma + p.sigma), xr,     //
        0.0, 0.0, 0.0;
    return m;
}

HopfPoint hopf_point(const AlphaParams& p, const RegulationTarget& target) {
    const SwitchAnalysis sa = critical_delay(p, target);
    if (!sa.tau_c || !sa.nu0) {
        throw DegenerateError("no imaginary-axis crossing: equilibrium is stable for all delays");
    }
    return {p, target, *sa.tau_c, *sa.nu0};
}

cvec3 eigenvector_q(const HopfPoint& hp) {
    const auto& p = hp.params;
    const double xr = hp.target.x_r;
    const cplx iv(0.0, hp.nu0);

    const CharQuasiPoly poly = build_char_poly(p, hp.target);
    if (std::abs(eval_W(poly, iv, hp.tau_c)) >= 1e-8 * poly.scale()) {
        throw ConsistencyError("(tau_c, nu0) is not a characteristic root");
    }

    cvec3 q;
    q << 1.0, (iv + p.sigma) / p.sigma, (p.sigma * xr + xr * (iv + p.sigma)) / (p.sigma * (p.b + iv));

    const LinearizationMatrices m = build_B_matrices(p, hp.target);
    const Eigen::Matrix3cd a = iv * Eigen::Matrix3cd::Identity() - m.B1.cast<cplx>() -
                               m.B2.cast<cplx>() * std::exp(-kI * hp.omega());
    const double tol = 1e-8 * (1.0 + a.cwiseAbs().maxCoeff());
    if ((a * q).cwiseAbs().maxCoeff() >= tol) {
        throw ConsistencyError("eigenvector residual too large");
    }
    return q;
}

cvec3 eigenvector_qstar(const HopfPoint& hp) {
    const auto& p = hp.params;
    const double xr = hp.target.x_r;
    const double b = p.b;
    const cplx iv(0.0, hp.nu0);
    const cplx e = std::exp(kI * hp.omega());

    const cplx den = 2.0 * b * xr * xr - p.r * b * b + iv * (p.r * b - xr * xr);
    const cplx one_minus_e = 1.0 - e;
    if (std::abs(one_minus_e) < 1e-12 || std::abs(den) < 1e-12 * (1.0 + std::abs(p.r) * b * b + b * xr * xr)) {
        throw DegenerateError("adjoint eigenvector denominator vanishes");
    }
    cvec3 qs;
    qs << 1.0, b * (iv - p.sigma) * (b - iv) / (one_minus_e * den), -b * xr * (iv - p.sigma) / den;

    const LinearizationMatrices m = build_B_matrices(p, hp.target);
    const Eigen::Matrix3cd a =
        iv * Eigen::Matrix3cd::Identity() + m.B1.cast<cplx>() + m.B2.cast<cplx>() * e;
    const double tol = 1e-8 * (1.0 + a.cwiseAbs().maxCoeff());
    if ((qs.transpose() * a).cwiseAbs().maxCoeff() >= tol) {
        throw ConsistencyError("adjoint eigenvector residual too large");
    }
    return qs;
}

cplx normalization_D(const HopfPoint& hp, const cvec3& q, const cvec3& qs) {
    const auto& p = hp.params;
    const double xr = hp.target.x_r;
    const double c = coupling(hp);
    const cplx q2b = std::conj(q(1));
    const cplx q3b = std::conj(q(2));
    const cplx den = 1.0 + qs(1) * q2b + qs(2) * q3b -
                     hp.tau_c * std::exp(kI * hp.omega()) *
                         (c * qs(1) + (p.gamma + p.sigma) * q2b * qs(1) - xr * qs(1) * q3b);
    if (std::abs(den) < 1e-14) {
        throw DegenerateError("normalization denominator vanishes");
    }
    return 1.0 / den;
}

cplx bilinear_form(const LinearizationMatrices& m, double tau_c, const ExpMode& psi, const ExpMode& phi) {
    const double k = phi.rate - psi.rate;
    const cplx integral = k == 0.0 ? cplx(1.0) : (1.0 - std::exp(-kI * k)) / (kI * k);
    // Eigen's dot() conjugates its left operand: psi.v.dot(x) = conj(psi.v)^T x.
    const cplx head = psi.v.dot(phi.v);
    const cplx tail = psi.v.dot(m.B2.cast<cplx>() * phi.v);
    return head + tau_c * std::exp(-kI * psi.rate) * integral * tail;
}

QuadraticCoefficients g_low_order(const cvec3& q, const cvec3& qs, cplx d_norm, double tau_c, double nu0) {
    const double w = tau_c * nu0;
    const cplx pre = 2.0 * std::conj(d_norm) * tau_c;
    const cplx q2s = std::conj(qs(1));
    const cplx q3s = std::conj(qs(2));
    const cplx q2 = q(1);
    const cplx q3 = q(2);
    QuadraticCoefficients g;
    g.g20 = pre * (q2s * q3 * std::exp(-2.0 * kI * w) - q2s * q3 + q3s * q2);
    g.g11 = pre * q3s * q2.real();
    g.g02 = pre * (q2s * std::conj(q3) * std::exp(2.0 * kI * w) - q2s * std::conj(q3) + q3s * std::conj(q2));
    return g;
}

CenterManifoldConstants solve_E1_E2(const HopfPoint& hp, const cvec3& q) {
    const LinearizationMatrices m = build_B_matrices(hp.params, hp.target);
    const cplx e2 = std::exp(-2.0 * kI * hp.omega());

    const Eigen::Matrix3cd g = 2.0 * kI * hp.nu0 * Eigen::Matrix3cd::Identity() - m.B1.cast<cplx>() -
                               m.B2.cast<cplx>() * e2;
    const Eigen::Matrix3cd g_prime = (-(m.B1 + m.B2)).cast<cplx>();

    CenterManifoldConstants out;
    out.cond_G = condition_number(g);
    out.cond_Gprime = condition_number(g_prime);
    if (!(out.cond_G <= kMaxCondition) || !(out.cond_Gprime <= kMaxCondition)) {
        throw ResonanceError("center-manifold system is singular (2 i nu0 or 0 is a characteristic root)");
    }

    cvec3 rhs1;
    rhs1 << 0.0, -q(2) + q(2) * e2, q(1);
    cvec3 rhs2;
    rhs2 << 0.0, 0.0, q(1).real();
    out.E1 = g.partialPivLu().solve(2.0 * rhs1);
    out.E2 = g_prime.partialPivLu().solve(2.0 * rhs2);
    return out;
}

WVectors W_vectors(const cvec3& q, const QuadraticCoefficients& g, const CenterManifoldConstants& e, double tau_c,
                   double nu0, double theta) {
    const double w = tau_c * nu0;
    const cplx ep = std::exp(kI * theta * w);
    const cplx em = std::exp(-kI * theta * w);
    const cvec3 qb = q.conjugate();
    WVectors out;
    out.w20 = (kI * g.g20 / w) * ep * q + (kI * std::conj(g.g02) / (3.0 * w)) * em * qb +
              std::exp(2.0 * kI * theta * w) * e.E1;
    out.w11 = (-kI * g.g11 / w) * ep * q + (kI * std::conj(g.g11) / w) * em * qb + e.E2;
    return out;
}

cplx g21(const cvec3& q, const cvec3& qs, cplx d_norm, const QuadraticCoefficients& g,
         const CenterManifoldConstants& e, double tau_c, double nu0) {
    const double w = tau_c * nu0;
    const WVectors at0 = W_vectors(q, g, e, tau_c, nu0, 0.0);
    const WVectors at1 = W_vectors(q, g, e, tau_c, nu0, -1.0);
    const cplx pre = 2.0 * std::conj(d_norm) * tau_c;
    const cplx q2s = std::conj(qs(1));
    const cplx q3s = std::conj(qs(2));
    const cplx q2 = q(1);
    const cplx q3 = q(2);
    const cplx ep = std::exp(kI * w);
    const cplx em = std::exp(-kI * w);

    // Components (1), (2), (3) are indices 0, 1, 2.
    const cplx now_xz = 0.5 * std::conj(q3) * at0.w20(0) + q3 * at0.w11(0) + 0.5 * at0.w20(2) + at0.w11(2);
    const cplx delayed_xz = at1.w11(2) * em + 0.5 * at1.w20(2) * ep + at1.w11(0) * q3 * em +
                            0.5 * at1.w20(0) * std::conj(q3) * ep;
    const cplx now_xy = at0.w11(1) + 0.5 * at0.w20(1) + at0.w11(0) * q2 + 0.5 * at0.w20(0) * std::conj(q2);
    return pre * (-q2s * now_xz + q2s * delayed_xz + q3s * now_xy);
}

namespace {

/// Fills c1 and the derived bifurcation data from the computed Taylor terms.
void finish(NormalForm& nf, const HopfPoint& hp) {
    const double w = hp.omega();
    nf.c1 = kI / (2.0 * w) * (nf.g20 * nf.g11 - 2.0 * std::norm(nf.g11) - std::norm(nf.g02) / 3.0) + nf.g21 / 2.0;

    const CharQuasiPoly poly = build_char_poly(hp.params, hp.target);
    nf.lambda_prime = root_velocity(poly, hp.tau_c, cplx(0.0, hp.nu0));
    if (!(nf.lambda_prime.real() > 0.0)) {
        throw ContradictionError("Re lambda'(tau_c) <= 0 contradicts stability below tau_c");
    }

    nf.mu2 = -nf.c1.real() / nf.lambda_prime.real();
    nf.beta2 = 2.0 * nf.c1.real();
    nf.t2 = -(nf.c1.imag() + nf.mu2 * nf.lambda_prime.imag()) / w;
    nf.direction = nf.mu2 > 0.0 ? HopfDirection::supercritical : HopfDirection::subcritical;
    nf.orbit_stability = nf.beta2 < 0.0 ? OrbitStability::stable : OrbitStability::unstable;
    nf.period = 2.0 * std::numbers::pi / hp.nu0;
    nf.amplitude_sq_slope = 4.0 * hp.tau_c / nf.mu2;
}

/// Quadratic part of controlled_rhs at the target for a deviation u now and
/// d delayed. The field is exactly quadratic, so the symmetric difference
/// recovers it without truncation error.
cvec3 quadratic_part(const HopfPoint& hp, const cvec3& u, const cvec3& d) {
    using CS = Triple<cplx>;
    const State t = hp.target.point();
    const CS base{t.x, t.y, t.z};
    const CS du{u(0), u(1), u(2)};
    const CS dd{d(0), d(1), d(2)};
    const CS plus = controlled_rhs<cplx>(hp.params, hp.target, base + du, base + dd);
    const CS minus = controlled_rhs<cplx>(hp.params, hp.target, base - du, base - dd);
    const CS zero = controlled_rhs<cplx>(hp.params, hp.target, base, base);
    const CS n = 0.5 * (plus + minus) - zero;
    return cvec3(n.x, n.y, n.z);
}

/// Symmetric bilinear form with quadratic_part(u, d) = bilinear(u, d; u, d).
cvec3 bilinear_part(const HopfPoint& hp, const cvec3& u1, const cvec3& d1, const cvec3& u2, const cvec3& d2) {
    return 0.25 * (quadratic_part(hp, u1 + u2, d1 + d2) - quadratic_part(hp, u1 - u2, d1 - d2));
}

}  // namespace

NormalForm classify(const HopfPoint& hp) {
    NormalForm nf;
    nf.tau_c = hp.tau_c;
    nf.nu0 = hp.nu0;
    nf.q = eigenvector_q(hp);
    nf.qstar = eigenvector_qstar(hp);
    nf.d_norm = normalization_D(hp, nf.q, nf.qstar);

    const QuadraticCoefficients g = g_low_order(nf.q, nf.qstar, nf.d_norm, hp.tau_c, hp.nu0);
    nf.g20 = g.g20;
    nf.g11 = g.g11;
    nf.g02 = g.g02;

    const CenterManifoldConstants e = solve_E1_E2(hp, nf.q);
    nf.E1 = e.E1;
    nf.E2 = e.E2;
    nf.cond_G = e.cond_G;
    nf.g21 = g21(nf.q, nf.qstar, nf.d_norm, g, e, hp.tau_c, hp.nu0);
    finish(nf, hp);
    return nf;
}

NormalForm classify_in_basis(const HopfPoint& hp, const cvec3& q, const cvec3& qstar) {
    const double w = hp.omega();
    const double tau = hp.tau_c;
    const LinearizationMatrices m = build_B_matrices(hp.params, hp.target);
    const cplx e = std::exp(-kI * w);

    NormalForm nf;
    nf.tau_c = tau;
    nf.nu0 = hp.nu0;
    nf.q = q;
    nf.qstar = qstar;
    nf.d_norm = 1.0 / std::conj(bilinear_form(m, tau, {qstar, w}, {q, w}));

    // Samples at theta = 0 and theta = -1 of q e^{i w theta} and its conjugate.
    const cvec3 q0 = q;
    const cvec3 q1 = q * e;
    const cvec3 qb0 = q.conjugate();
    const cvec3 qb1 = q1.conjugate();
    const cplx pre = 2.0 * std::conj(nf.d_norm) * tau;
    auto project = [&](const cvec3& f) { return pre * qstar.dot(f); };

    const cvec3 f20 = quadratic_part(hp, q0, q1);
    const cvec3 f11 = bilinear_part(hp, q0, q1, qb0, qb1);
    const cvec3 f02 = quadratic_part(hp, qb0, qb1);
    nf.g20 = project(f20);
    nf.g11 = project(f11);
    nf.g02 = project(f02);

    const Eigen::Matrix3cd g_mat = 2.0 * kI * hp.nu0 * Eigen::Matrix3cd::Identity() - m.B1.cast<cplx>() -
                                   m.B2.cast<cplx>() * (e * e);
    const Eigen::Matrix3cd gp_mat = (-(m.B1 + m.B2)).cast<cplx>();
    nf.cond_G = condition_number(g_mat);
    if (!(nf.cond_G <= kMaxCondition) || !(condition_number(gp_mat) <= kMaxCondition)) {
        throw ResonanceError("center-manifold system is singular (2 i nu0 or 0 is a characteristic root)");
    }
    nf.E1 = g_mat.partialPivLu().solve(2.0 * f20);
    nf.E2 = gp_mat.partialPivLu().solve(2.0 * f11);

    const QuadraticCoefficients g{nf.g20, nf.g11, nf.g02};
    const CenterManifoldConstants consts{nf.E1, nf.E2, nf.cond_G, 0.0};
    const WVectors at0 = W_vectors(q, g, consts, tau, hp.nu0, 0.0);
    const WVectors at1 = W_vectors(q, g, consts, tau, hp.nu0, -1.0);
    const cvec3 cubic = 2.0 * bilinear_part(hp, q0, q1, at0.w11, at1.w11) + bilinear_part(hp, qb0, qb1, at0.w20, at1.w20);
    nf.g21 = project(cubic);
    finish(nf, hp);
    return nf;
}

const char* to_string(HopfDirection d) {
    return d == HopfDirection::supercritical ? "supercritical" : "subcritical";
}

const char* to_string(OrbitStability s) { return s == OrbitStability::stable ? "stable" : "unstable"; }

}  // namespace lorenz_lab
