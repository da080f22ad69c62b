#include "lorenz_lab/spectral_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lorenz_lab/errors.hpp"

namespace lorenz_lab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs(std::initializer_list<double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

double CharQuasiPoly::scale() const { return 1.0 + max_abs({1.0, a2, a1, a0, b2, b1, b0}); }

double AuxCubic::scale() const { return 1.0 + max_abs({1.0, c2, c1, c0}); }

CharQuasiPoly build_char_poly(const AlphaParams& p, const RegulationTarget& target) {
    const double s = p.sigma;
    const double b = p.b;
    const double g = p.gamma;
    const double xr2 = target.x_r * target.x_r;

    CharQuasiPoly poly;
    poly.params = p;
    poly.x_r = target.x_r;
    poly.k1 = xr2 + s * xr2 / b - s * p.r - g * (s + b);
    poly.k2 = 3.0 * xr2 - b * g - b * p.r;
    poly.a2 = b + s - g;
    poly.a1 = s * b + poly.k1;
    poly.a0 = s * poly.k2;
    poly.b2 = s + g;
    poly.b1 = s * b + s * s - poly.k1;
    poly.b0 = s * s * b - s * poly.k2;
    return poly;
}

cplx eval_W(const CharQuasiPoly& poly, cplx lambda, double tau) {
    return poly.P(lambda) + poly.Q(lambda) * std::exp(-lambda * tau);
}

cplx eval_dW(const CharQuasiPoly& poly, cplx lambda, double tau) {
    return poly.dP(lambda) + (poly.dQ(lambda) - tau * poly.Q(lambda)) * std::exp(-lambda * tau);
}

RouthHurwitz routh_hurwitz_tau0(const CharQuasiPoly& poly) {
    RouthHurwitz rh;
    rh.c2 = poly.a2 + poly.b2;
    rh.c1 = poly.a1 + poly.b1;
    rh.c0 = poly.a0 + poly.b0;
    rh.hurwitz_margin = rh.c2 * rh.c1 - rh.c0;
    rh.stable = rh.c2 > 0.0 && rh.c0 > 0.0 && rh.hurwitz_margin > 0.0;

    const double s = poly.params.sigma;
    const double b = poly.params.b;
    rh.identity_residual = (b + 2.0 * s) * (2.0 * s * b + s * s) - s * s * b - 2.0 * s * (s + b) * (s + b);
    return rh;
}

AuxCubic build_aux_cubic(const CharQuasiPoly& poly) {
    // |P(i nu)|^2 - |Q(i nu)|^2 expanded in x = nu^2.
    AuxCubic aux;
    aux.c2 = poly.a2 * poly.a2 - 2.0 * poly.a1 - poly.b2 * poly.b2;
    aux.c1 = poly.a1 * poly.a1 - 2.0 * poly.a0 * poly.a2 - poly.b1 * poly.b1 + 2.0 * poly.b0 * poly.b2;
    aux.c0 = poly.a0 * poly.a0 - poly.b0 * poly.b0;
    aux.delta = aux.c2 * aux.c2 - 3.0 * aux.c1;
    if (aux.delta > 0.0) {
        const double root = std::sqrt(aux.delta);
        aux.x_star = (-aux.c2 + root) / 3.0;
        aux.x_star2 = (-aux.c2 - root) / 3.0;
    }
    return aux;
}

HopfConditions hopf_conditions(const AuxCubic& aux) {
    HopfConditions h;
    h.stable_for_all_tau = aux.delta <= 0.0 && aux.c0 >= 0.0;
    h.c0_negative = aux.c0 < 0.0;
    h.critical_point_test = aux.delta > 0.0 && aux.x_star && *aux.x_star > 0.0 && aux(*aux.x_star) < 0.0;
    return h;
}

std::vector<CubicRoot> cubic_positive_roots(const AuxCubic& aux) {
    Eigen::Matrix3d companion;
    companion << -aux.c2, -aux.c1, -aux.c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    const Eigen::Vector3cd eig = solver.eigenvalues();

    const double f_tol = 1e-9 * std::max(1.0, std::abs(aux.c0));
    std::vector<double> real_roots;
    for (int i = 0; i < 3; ++i) {
        const cplx e = eig(i);
        // Near-double roots come back as a complex pair with tiny imaginary part.
        if (std::abs(e.imag()) > 1e-6 * (1.0 + std::abs(e.real()))) {
            continue;
        }
        double x = e.real();
        for (int it = 0; it < 50 && std::abs(aux(x)) >= f_tol; ++it) {
            const double d = aux.derivative(x);
            if (d == 0.0) {
                break;
            }
            x -= aux(x) / d;
        }
        real_roots.push_back(x);
    }
    std::sort(real_roots.begin(), real_roots.end());

    std::vector<CubicRoot> out;
    for (double x : real_roots) {
        if (!out.empty() && std::abs(x - out.back().x) < 1e-6 * (1.0 + std::abs(x))) {
            out.back().simple = false;
            continue;
        }
        out.push_back({x, true});
    }
    std::erase_if(out, [](const CubicRoot& r) { return !(r.x > 0.0); });
    return out;
}

std::vector<double> delay_sequence(const CharQuasiPoly& poly, double nu, int n_max) {
    if (!(nu > 0.0)) {
        throw DomainError("delay_sequence needs nu > 0");
    }
    const cplx iv(0.0, nu);
    const cplx p = poly.P(iv);
    const cplx q = poly.Q(iv);
    const double pr = p.real(), pi = p.imag();
    const double qr = q.real(), qi = q.imag();
    const double den = qr * qr + qi * qi;
    if (std::sqrt(den) < 1e-14 * poly.scale()) {
        throw DegenerateError("Q(i nu) vanishes at nu = " + std::to_string(nu));
    }
    const double sin_v = (-pr * qi + qr * pi) / den;
    const double cos_v = -(pr * qr + pi * qi) / den;
    double theta = std::atan2(sin_v, cos_v);
    if (theta < 0.0) {
        theta += kTwoPi;
    }

    std::vector<double> taus;
    for (int n = 0; n <= n_max; ++n) {
        const double tau = (theta + kTwoPi * n) / nu;
        if (tau > 0.0) {
            taus.push_back(tau);
        }
    }
    return taus;
}

SwitchAnalysis critical_delay(const AlphaParams& p, const RegulationTarget& target, const SwitchOptions& opts) {
    return critical_delay(build_char_poly(p, target), opts);
}

SwitchAnalysis critical_delay(const CharQuasiPoly& poly, const SwitchOptions& opts) {
    if (!routh_hurwitz_tau0(poly).stable) {
        throw DomainError("undelayed closed loop is not Routh-Hurwitz stable");
    }
    const AuxCubic aux = build_aux_cubic(poly);

    SwitchAnalysis out;
    for (const CubicRoot& root : cubic_positive_roots(aux)) {
        ImaginaryRoot ir;
        ir.x = root.x;
        ir.nu = std::sqrt(root.x);
        ir.fprime = aux.derivative(root.x);
        ir.direction = ir.fprime > 0.0 ? Crossing::left_to_right : Crossing::right_to_left;
        ir.simple = root.simple;
        const int n_max = std::max(0, static_cast<int>(std::ceil(opts.tau_horizon * ir.nu / kTwoPi)));
        ir.tau_seq = delay_sequence(poly, ir.nu, n_max);
        while (ir.tau_seq.size() > 1 && ir.tau_seq.back() > opts.tau_horizon) {
            ir.tau_seq.pop_back();
        }
        out.positive_roots.push_back(std::move(ir));
    }

    if (out.positive_roots.empty()) {
        out.stable_for_all_tau = true;
        return out;
    }

    for (const ImaginaryRoot& ir : out.positive_roots) {
        if (ir.fprime == 0.0) {
            continue;  // tangency: no crossing
        }
        for (double tau : ir.tau_seq) {
            out.schedule.push_back({tau, ir.direction, ir.nu, 0});
        }
    }
    std::sort(out.schedule.begin(), out.schedule.end(),
              [](const SwitchEvent& a, const SwitchEvent& b) { return a.tau < b.tau; });
    int unstable = 0;
    for (SwitchEvent& ev : out.schedule) {
        unstable += ev.crossing == Crossing::left_to_right ? 2 : -2;
        ev.unstable_roots_after = unstable;
    }

    if (out.schedule.empty()) {
        out.stable_for_all_tau = true;
        return out;
    }
    const SwitchEvent& first = out.schedule.front();
    if (first.crossing != Crossing::left_to_right) {
        throw ContradictionError("first imaginary-axis crossing is stabilizing although tau = 0 is stable");
    }
    out.tau_c = first.tau;
    out.nu0 = first.nu;

    double nu_destab = 0.0;
    double nu_stab = 0.0;
    for (const ImaginaryRoot& ir : out.positive_roots) {
        if (ir.fprime > 0.0) {
            nu_destab = std::max(nu_destab, ir.nu);
        } else if (ir.fprime < 0.0) {
            nu_stab = std::max(nu_stab, ir.nu);
        }
    }
    // Destabilizing crossings recur every 2 pi / nu; the denser family wins.
    out.eventually_unstable = nu_destab > nu_stab;
    return out;
}

Transversality transversality(const AuxCubic& aux, double nu0) {
    if (!(nu0 > 0.0)) {
        throw DomainError("transversality needs nu0 > 0");
    }
    Transversality t;
    t.value = aux.derivative(nu0 * nu0);
    t.sign = (t.value > 0.0) - (t.value < 0.0);
    t.degenerate = std::abs(t.value) < 1e-8 * aux.scale();
    return t;
}

cplx newton_root(const CharQuasiPoly& poly, double tau, cplx guess) {
    const double tol = 1e-10 * poly.scale();
    cplx lambda = guess;
    for (int it = 0; it < 50; ++it) {
        const cplx w = eval_W(poly, lambda, tau);
        if (std::abs(w) < tol) {
            return lambda;
        }
        const cplx dw = eval_dW(poly, lambda, tau);
        if (std::abs(dw) == 0.0) {
            break;
        }
        lambda -= w / dw;
    }
    if (std::abs(eval_W(poly, lambda, tau)) < tol) {
        return lambda;
    }
    throw RootTrackingError("Newton iteration on W did not converge at tau = " + std::to_string(tau));
}

cplx root_velocity(const CharQuasiPoly& poly, double tau, cplx lambda) {
    const cplx e = std::exp(-lambda * tau);
    const cplx den = poly.dP(lambda) + (poly.dQ(lambda) - tau * poly.Q(lambda)) * e;
    if (std::abs(den) == 0.0) {
        throw DegenerateError("dW/dlambda vanishes: root is not simple");
    }
    return lambda * poly.Q(lambda) * e / den;
}

}  // namespace lorenz_lab
