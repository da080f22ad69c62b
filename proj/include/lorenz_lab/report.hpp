#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorenz_lab/dde_integrator.hpp"
#include "lorenz_lab/errors.hpp"
#include "lorenz_lab/omega_map.hpp"
#include "lorenz_lab/sweep_report.hpp"

namespace lorenz_lab {

using json = nlohmann::ordered_json;

/// Spectral analysis and normal form at one alpha. normal_form is null when
/// the target is stable for every delay. Pipeline failures propagate.
json analysis_report(double alpha, std::optional<double> x_r = std::nullopt);

json metrics_json(const OscillationMetrics& m, const TrajectoryMeta& meta);
json contour_json(const OmegaContour& c);
json sweep_json(const std::vector<SweepRow>& rows, const SweepVerdicts& v);
json regime_json(const RegimeResult& r);

/// {"error": {"kind": ..., "message": ...}} plus blowup_time for divergence.
json error_json(const Error& e);
json error_json(const std::string& kind, const std::string& message);

/// Minimal standalone SVG line plot.
void write_polyline_svg(std::ostream& out, const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::string& title, const std::string& x_label, const std::string& y_label,
                        bool mark_origin);

}  // namespace lorenz_lab
