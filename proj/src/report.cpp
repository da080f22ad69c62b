#include "lorenz_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lorenz_lab/hopf_normal_form.hpp"
#include "lorenz_lab/spectral_analysis.hpp"

namespace lorenz_lab {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(cplx z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json vector_json(const cvec3& v) { return json::array({complex_json(v(0)), complex_json(v(1)), complex_json(v(2))}); }

const char* to_string(Crossing c) { return c == Crossing::left_to_right ? "left_to_right" : "right_to_left"; }

json normal_form_json(const NormalForm& nf) {
    return {
        {"q", vector_json(nf.q)},
        {"qstar", vector_json(nf.qstar)},
        {"D", complex_json(nf.d_norm)},
        {"g20", complex_json(nf.g20)},
        {"g11", complex_json(nf.g11)},
        {"g02", complex_json(nf.g02)},
        {"g21", complex_json(nf.g21)},
        {"E1", vector_json(nf.E1)},
        {"E2", vector_json(nf.E2)},
        {"cond_G", number(nf.cond_G)},
        {"c1", complex_json(nf.c1)},
        {"lambda_prime", complex_json(nf.lambda_prime)},
        {"mu2", number(nf.mu2)},
        {"beta2", number(nf.beta2)},
        {"t2", number(nf.t2)},
        {"direction", to_string(nf.direction)},
        {"stability", to_string(nf.orbit_stability)},
        {"period", number(nf.period)},
        {"amplitude_sq_slope", number(nf.amplitude_sq_slope)},
    };
}

}  // namespace

json analysis_report(double alpha, std::optional<double> x_r) {
    const AlphaParams p = params_from_alpha(alpha);
    const RegulationTarget target = x_r ? RegulationTarget::at(p, *x_r) : RegulationTarget::e_plus(p);
    const CharQuasiPoly poly = build_char_poly(p, target);
    const RouthHurwitz rh = routh_hurwitz_tau0(poly);
    const AuxCubic aux = build_aux_cubic(poly);
    const HopfConditions hc = hopf_conditions(aux);
    const SwitchAnalysis sa = critical_delay(p, target);

    json roots = json::array();
    for (const ImaginaryRoot& r : sa.positive_roots) {
        json taus = json::array();
        for (double t : r.tau_seq) {
            taus.push_back(number(t));
        }
        roots.push_back({{"x", number(r.x)},
                         {"nu", number(r.nu)},
                         {"fprime", number(r.fprime)},
                         {"fprime_sign", r.fprime > 0.0 ? 1 : (r.fprime < 0.0 ? -1 : 0)},
                         {"crossing", to_string(r.direction)},
                         {"simple", r.simple},
                         {"tau_seq", taus}});
    }
    json schedule = json::array();
    for (const SwitchEvent& e : sa.schedule) {
        schedule.push_back({{"tau", number(e.tau)},
                            {"nu", number(e.nu)},
                            {"crossing", to_string(e.crossing)},
                            {"unstable_roots_after", e.unstable_roots_after}});
    }

    json report = {
        {"alpha", alpha},
        {"params", {{"sigma", p.sigma}, {"r", p.r}, {"b", p.b}, {"gamma", p.gamma}}},
        {"x_r", target.x_r},
        {"z_star", target.z_star},
        {"K1", poly.k1},
        {"K2", poly.k2},
        {"p_coeffs", {{"a2", poly.a2}, {"a1", poly.a1}, {"a0", poly.a0}}},
        {"q_coeffs", {{"b2", poly.b2}, {"b1", poly.b1}, {"b0", poly.b0}}},
        {"routh_hurwitz", {{"stable", rh.stable}, {"margin", rh.hurwitz_margin}}},
        {"cubic_coeffs", {{"c2", aux.c2}, {"c1", aux.c1}, {"c0", aux.c0}}},
        {"delta", aux.delta},
        {"hopf_conditions",
         {{"stable_for_all_tau", hc.stable_for_all_tau},
          {"c0_negative", hc.c0_negative},
          {"critical_point_test", hc.critical_point_test}}},
        {"roots", roots},
        {"tau_c", sa.tau_c ? json(*sa.tau_c) : json(nullptr)},
        {"nu0", sa.nu0 ? json(*sa.nu0) : json(nullptr)},
        {"schedule", schedule},
        {"eventually_unstable", sa.eventually_unstable},
        {"stable_for_all_tau", sa.stable_for_all_tau},
    };
    if (sa.tau_c && sa.nu0) {
        const NormalForm nf = classify(HopfPoint{p, target, *sa.tau_c, *sa.nu0});
        report["transversality"] = number(transversality(aux, *sa.nu0).value);
        report["normal_form"] = normal_form_json(nf);
        report["direction"] = to_string(nf.direction);
        report["stability"] = to_string(nf.orbit_stability);
    } else {
        report["normal_form"] = nullptr;
    }
    return report;
}

json metrics_json(const OscillationMetrics& m, const TrajectoryMeta& meta) {
    return {
        {"alpha", meta.alpha},
        {"tau", meta.tau},
        {"h", meta.h},
        {"x_r", meta.x_r},
        {"converged", m.converged},
        {"oscillating", m.oscillating},
        {"final_distance_to_target", number(m.final_distance_to_target)},
        {"amplitude", number(m.amplitude)},
        {"period", number(m.period)},
        {"peak_count", m.peak_count},
        {"amplitude_drift", number(m.amplitude_drift)},
    };
}

json contour_json(const OmegaContour& c) {
    return {
        {"tau", c.tau},
        {"n_points", c.nu_samples.size()},
        {"nu_max", c.nu_samples.empty() ? 0.0 : c.nu_samples.back()},
        {"min_distance", number(c.min_distance)},
        {"min_nu", number(c.min_nu)},
        {"refined_min_distance", number(c.refined_min_distance)},
        {"refined_min_nu", number(c.refined_min_nu)},
        {"enclosed_roots", c.enclosed_roots},
        {"origin_crossed", c.origin_crossed},
    };
}

json sweep_json(const std::vector<SweepRow>& rows, const SweepVerdicts& v) {
    json failed = json::array();
    for (const SweepRow& r : rows) {
        if (!r.ok) {
            failed.push_back({{"alpha", r.alpha}, {"kind", r.error_kind}, {"message", r.error_message}});
        }
    }
    return {
        {"rows", rows.size()},
        {"failed_rows", failed},
        {"verdicts",
         {{"all_rows_ok", v.all_rows_ok},
          {"tau_c_decreasing", v.tau_c_decreasing},
          {"delta_positive", v.delta_positive},
          {"fprime_positive", v.fprime_positive},
          {"beta2_negative", v.beta2_negative},
          {"mu2_positive", v.mu2_positive},
          {"sign_agreement", v.sign_agreement}}},
    };
}

json regime_json(const RegimeResult& r) {
    json j = {{"tau", r.tau}, {"offset", r.offset}, {"regime", to_string(r.regime)}};
    if (r.blowup_time) {
        j["blowup_time"] = *r.blowup_time;
    } else {
        j["amplitude"] = number(r.metrics.amplitude);
        j["period"] = number(r.metrics.period);
        j["amplitude_drift"] = number(r.metrics.amplitude_drift);
        j["final_distance_to_target"] = number(r.metrics.final_distance_to_target);
    }
    return j;
}

json error_json(const Error& e) {
    json j = error_json(e.kind(), e.what());
    if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) {
        j["error"]["blowup_time"] = d->blowup_time();
    }
    return j;
}

json error_json(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

void write_polyline_svg(std::ostream& out, const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::string& title, const std::string& x_label, const std::string& y_label,
                        bool mark_origin) {
    constexpr double kWidth = 640;
    constexpr double kHeight = 480;
    constexpr double kMargin = 56;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!xs.empty()) {
        x0 = *std::min_element(xs.begin(), xs.end());
        x1 = *std::max_element(xs.begin(), xs.end());
        y0 = *std::min_element(ys.begin(), ys.end());
        y1 = *std::max_element(ys.begin(), ys.end());
    }
    if (mark_origin) {
        x0 = std::min(x0, 0.0);
        x1 = std::max(x1, 0.0);
        y0 = std::min(y0, 0.0);
        y1 = std::max(y1, 0.0);
    }
    if (x1 == x0) {
        x1 = x0 + 1;
    }
    if (y1 == y0) {
        y1 = y0 + 1;
    }
    auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
    auto py = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  kWidth, kHeight, kWidth, kHeight);
    out << buf;
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#888\"/>\n",
                  kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">", kWidth / 2);
    out << buf << title << "</text>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"13\">", kWidth / 2,
                  kHeight - 14);
    out << buf << x_label << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 %g)\">",
                  kHeight / 2, kHeight / 2);
    out << buf << y_label << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\">%.6g</text>\n<text x=\"%g\" y=\"%g\" font-size=\"11\" "
                  "text-anchor=\"end\">%.6g</text>\n",
                  kMargin, kHeight - kMargin + 16, x0, kWidth - kMargin, kHeight - kMargin + 16, x1);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.6g</text>\n<text x=\"%g\" y=\"%g\" "
                  "font-size=\"11\" text-anchor=\"end\">%.6g</text>\n",
                  kMargin - 4, kHeight - kMargin, y0, kMargin - 4, kMargin + 10, y1);
    out << buf;

    out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", px(xs[i]), py(ys[i]));
        out << buf;
    }
    out << "\"/>\n";
    if (mark_origin) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#c0392b\"/>\n", px(0.0),
                      py(0.0));
        out << buf;
    }
    out << "</svg>\n";
}

}  // namespace lorenz_lab
