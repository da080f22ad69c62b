#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lorenz_lab/dde_integrator.hpp"
#include "lorenz_lab/hopf_normal_form.hpp"

namespace lorenz_lab {

struct SweepRow {
    double alpha = 0;
    bool ok = false;
    std::string error_kind;
    std::string error_message;

    double tau_c = 0;
    double nu0 = 0;
    double delta = 0;
    double fprime = 0;
    double re_lambda_prime = 0;
    double beta2 = 0;
    double mu2 = 0;
    double t2 = 0;
    HopfDirection direction = HopfDirection::supercritical;
    OrbitStability stability = OrbitStability::stable;
};

/// Full spectral and normal-form pipeline at one alpha. Never throws for
/// pipeline failures; they are recorded on the row.
SweepRow analyze_row(double alpha, std::optional<double> x_r = std::nullopt);

/// Rows for alpha = k / (n - 1), ordered by alpha. threads = 0 picks the
/// hardware concurrency, capped by LORENZ_LAB_THREADS when set.
std::vector<SweepRow> alpha_sweep(std::size_t n, std::optional<double> x_r = std::nullopt, unsigned threads = 0);

struct SweepVerdicts {
    bool all_rows_ok = false;
    bool tau_c_decreasing = false;
    bool delta_positive = false;
    bool fprime_positive = false;
    bool beta2_negative = false;
    bool mu2_positive = false;
    /// sign Re lambda'(tau_c) = sign F'(nu0^2) = +1 on every row.
    bool sign_agreement = false;
    std::size_t failed_rows = 0;
};

SweepVerdicts summarize(const std::vector<SweepRow>& rows);

/// CSV `alpha,tau_c,nu0,delta,fprime,beta2,mu2,t2,direction,stability`.
/// Failed rows carry nan values, direction "failed" and the error kind.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// tau_c against alpha.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows);

enum class Regime { converged, oscillating, diverged, indeterminate };

const char* to_string(Regime r);

struct RegimeOptions {
    std::size_t steps_per_delay = 64;
    double t_end = 200.0;
    State initial{1.0, 1.0, 1.0};
    double tail_fraction = 0.25;
};

struct RegimeResult {
    double tau = 0;
    double offset = 0;
    Regime regime = Regime::indeterminate;
    OscillationMetrics metrics;
    std::optional<double> blowup_time;
};

/// Simulates the closed loop at an absolute delay, with E+ as target.
RegimeResult simulate_regime(double alpha, double tau, const RegimeOptions& opts = {});

/// Simulates at tau = tau_c (1 + offset) for each offset. Throws
/// DomainError for a zero offset.
std::vector<RegimeResult> verify_regimes(double alpha, const std::vector<double>& offsets,
                                         const RegimeOptions& opts = {});

/// Whether the verdict matches the sign of the offset.
bool regime_matches_offset(const RegimeResult& r);

}  // namespace lorenz_lab
