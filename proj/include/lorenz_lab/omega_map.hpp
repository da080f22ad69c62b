#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "lorenz_lab/spectral_analysis.hpp"

namespace lorenz_lab {

/// Image of the imaginary axis under omega = W(i nu) at a fixed delay.
struct OmegaContour {
    double tau = 0;
    std::vector<double> nu_samples;
    std::vector<cplx> omega;
    /// min |omega| over the samples and its (non-negative) nu.
    double min_distance = 0;
    double min_nu = 0;
    /// Golden-section refinement of the closest approach around min_nu.
    double refined_min_distance = 0;
    double refined_min_nu = 0;
    /// Characteristic roots with Re lambda > 0 (argument increment count).
    int enclosed_roots = 0;
    bool origin_crossed = false;
};

struct ContourOptions {
    /// Passing-through tolerance relative to |W(0)| = sigma^2 b.
    double crossing_tol_rel = 1e-3;
};

/// Samples nu uniformly on [-nu_max, nu_max]. origin_crossed holds when the
/// curve passes within tolerance of the origin or has already swept past it
/// (the origin is enclosed). Requires n_points >= 100.
OmegaContour map_contour(const CharQuasiPoly& poly, double tau, double nu_max, std::size_t n_points,
                         const ContourOptions& opts = {});

/// Roots of W(., tau) in the open right half plane, from the increment of
/// arg W(i nu) over nu in [0, inf): delta_arg = (3 - 2 N) pi / 2.
int right_half_plane_roots(const CharQuasiPoly& poly, double tau);

/// Default contour half-width: twice the largest imaginary-axis crossing
/// frequency.
double default_nu_max(const CharQuasiPoly& poly);

/// First delay in [tau_lo, tau_hi] at which the contour reaches the origin:
/// coarse scan over n_tau delays, then bisection to `tol`. Throws
/// BracketError when the predicate does not change on the bracket.
double crossing_scan(const CharQuasiPoly& poly, double tau_lo, double tau_hi, std::size_t n_tau, double tol = 1e-5);

/// CSV `nu,re_omega,im_omega`.
void write_contour_csv(std::ostream& out, const OmegaContour& contour);

/// SVG polyline of the omega-plane curve with an origin marker.
void write_contour_svg(std::ostream& out, const OmegaContour& contour);

}  // namespace lorenz_lab
