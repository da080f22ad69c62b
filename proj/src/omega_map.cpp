#include "lorenz_lab/omega_map.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "lorenz_lab/errors.hpp"
#include "lorenz_lab/report.hpp"

namespace lorenz_lab {

namespace {

double distance_at(const CharQuasiPoly& poly, double tau, double nu) {
    return std::abs(eval_W(poly, cplx(0.0, nu), tau));
}

/// Golden-section search for min |W(i nu)| on [lo, hi].
std::pair<double, double> refine_minimum(const CharQuasiPoly& poly, double tau, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = distance_at(poly, tau, c);
    double fd = distance_at(poly, tau, d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = distance_at(poly, tau, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = distance_at(poly, tau, d);
        }
    }
    const double nu = 0.5 * (a + b);
    return {nu, distance_at(poly, tau, nu)};
}

/// Sum of principal arg increments of W(i nu) over [nu0, nu1], subdividing
/// wherever a single step turns by more than pi/4.
double arg_increment(const CharQuasiPoly& poly, double tau, double nu0, double nu1, cplx w0, cplx w1, int depth) {
    const double step = std::arg(w1 / w0);
    if (std::abs(step) <= std::numbers::pi / 4.0 || depth >= 40) {
        return step;
    }
    const double mid = 0.5 * (nu0 + nu1);
    const cplx wm = eval_W(poly, cplx(0.0, mid), tau);
    return arg_increment(poly, tau, nu0, mid, w0, wm, depth + 1) + arg_increment(poly, tau, mid, nu1, wm, w1, depth + 1);
}

/// Frequency beyond which |W(i nu) / (i nu)^3 - 1| <= 1/2.
double asymptotic_frequency(const CharQuasiPoly& poly) {
    auto tail = [&](double nu) {
        const double p = std::abs(poly.a2) * nu * nu + std::abs(poly.a1) * nu + std::abs(poly.a0);
        const double q = std::abs(poly.b2) * nu * nu + std::abs(poly.b1) * nu + std::abs(poly.b0);
        return std::max(p, q) / (nu * nu * nu);
    };
    double nu = 1.0;
    while (tail(nu) > 0.25) {
        nu *= 2.0;
    }
    return nu;
}

}  // namespace

int right_half_plane_roots(const CharQuasiPoly& poly, double tau) {
    const double nu_end = asymptotic_frequency(poly);
    constexpr int kIntervals = 2048;
    double total = 0.0;
    cplx prev = eval_W(poly, cplx(0.0, 0.0), tau);
    for (int k = 1; k <= kIntervals; ++k) {
        const double a = nu_end * (k - 1) / kIntervals;
        const double b = nu_end * k / kIntervals;
        const cplx cur = eval_W(poly, cplx(0.0, b), tau);
        total += arg_increment(poly, tau, a, b, prev, cur, 0);
        prev = cur;
    }
    // Remaining turn from nu_end to infinity, where W ~ (i nu)^3.
    const cplx iv3 = std::pow(cplx(0.0, nu_end), 3);
    total += std::arg(iv3 / prev);
    const double n = (3.0 - 2.0 * total / std::numbers::pi) / 2.0;
    return static_cast<int>(std::lround(n));
}

OmegaContour map_contour(const CharQuasiPoly& poly, double tau, double nu_max, std::size_t n_points,
                         const ContourOptions& opts) {
    if (n_points < 100) {
        throw DomainError("map_contour needs at least 100 points");
    }
    if (!(nu_max > 0.0) || !(tau >= 0.0)) {
        throw DomainError("map_contour needs nu_max > 0 and tau >= 0");
    }
    OmegaContour c;
    c.tau = tau;
    c.nu_samples.resize(n_points);
    c.omega.resize(n_points);
    const double dnu = 2.0 * nu_max / static_cast<double>(n_points - 1);
    std::size_t best = n_points;
    for (std::size_t k = 0; k < n_points; ++k) {
        // Symmetric in k <-> n - 1 - k so the curve is exactly conjugate symmetric.
        const double span = static_cast<double>(2 * k) - static_cast<double>(n_points - 1);
        const double nu = nu_max * span / static_cast<double>(n_points - 1);
        c.nu_samples[k] = nu;
        c.omega[k] = eval_W(poly, cplx(0.0, nu), tau);
        if (nu >= -0.5 * dnu && (best == n_points || std::abs(c.omega[k]) < std::abs(c.omega[best]))) {
            best = k;
        }
    }
    c.min_distance = std::abs(c.omega[best]);
    c.min_nu = c.nu_samples[best];
    const double lo = c.nu_samples[best > 0 ? best - 1 : best];
    const double hi = c.nu_samples[best + 1 < n_points ? best + 1 : best];
    const auto [nu_ref, d_ref] = refine_minimum(poly, tau, lo, hi);
    c.refined_min_nu = nu_ref;
    c.refined_min_distance = std::min(d_ref, c.min_distance);

    c.enclosed_roots = right_half_plane_roots(poly, tau);
    const double tol = opts.crossing_tol_rel * std::abs(eval_W(poly, cplx(0.0, 0.0), tau));
    c.origin_crossed = c.refined_min_distance < tol || c.enclosed_roots > 0;
    return c;
}

double default_nu_max(const CharQuasiPoly& poly) {
    const auto roots = cubic_positive_roots(build_aux_cubic(poly));
    if (roots.empty()) {
        return 2.0 * std::sqrt(poly.scale());
    }
    return 2.0 * std::sqrt(roots.back().x);
}

double crossing_scan(const CharQuasiPoly& poly, double tau_lo, double tau_hi, std::size_t n_tau, double tol) {
    if (!(tau_lo < tau_hi) || tau_lo < 0.0 || n_tau < 2) {
        throw BracketError("crossing_scan needs 0 <= tau_lo < tau_hi and n_tau >= 2");
    }
    const double nu_max = default_nu_max(poly);
    auto crossed = [&](double tau) { return map_contour(poly, tau, nu_max, 2001).origin_crossed; };

    if (crossed(tau_lo)) {
        throw BracketError("origin already reached at tau_lo = " + std::to_string(tau_lo));
    }
    double lo = tau_lo;
    double hi = tau_lo;
    bool found = false;
    for (std::size_t i = 1; i < n_tau; ++i) {
        const double tau = tau_lo + (tau_hi - tau_lo) * static_cast<double>(i) / static_cast<double>(n_tau - 1);
        if (crossed(tau)) {
            hi = tau;
            found = true;
            break;
        }
        lo = tau;
    }
    if (!found) {
        throw BracketError("origin is never reached on [" + std::to_string(tau_lo) + ", " + std::to_string(tau_hi) +
                           "]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (crossed(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

void write_contour_csv(std::ostream& out, const OmegaContour& contour) {
    out << "nu,re_omega,im_omega\n";
    char buf[96];
    for (std::size_t k = 0; k < contour.nu_samples.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", contour.nu_samples[k], contour.omega[k].real(),
                      contour.omega[k].imag());
        out << buf;
    }
}

void write_contour_svg(std::ostream& out, const OmegaContour& contour) {
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(contour.omega.size());
    im.reserve(contour.omega.size());
    for (const cplx& w : contour.omega) {
        re.push_back(w.real());
        im.push_back(w.imag());
    }
    char title[96];
    std::snprintf(title, sizeof title, "omega-plane, tau = %.6g", contour.tau);
    write_polyline_svg(out, re, im, title, "Re omega", "Im omega", true);
}

}  // namespace lorenz_lab
