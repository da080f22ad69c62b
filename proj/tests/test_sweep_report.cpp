#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "lorenz_lab/errors.hpp"
#include "lorenz_lab/sweep_report.hpp"

using namespace lorenz_lab;
using Catch::Approx;

namespace {

std::string csv_of(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

}  // namespace

TEST_CASE("single row pipeline", "[sweep_report]") {
    const SweepRow lorenz = analyze_row(0.0);
    REQUIRE(lorenz.ok);
    CHECK(lorenz.tau_c == Approx(0.12078499838151675).epsilon(1e-10));
    CHECK(lorenz.nu0 == Approx(16.67731935313656).epsilon(1e-10));
    CHECK(lorenz.fprime == Approx(125262.31853398276).epsilon(1e-9));
    CHECK(lorenz.beta2 == Approx(-0.014726409438225304).epsilon(1e-9));
    CHECK(lorenz.direction == HopfDirection::supercritical);
    CHECK(lorenz.stability == OrbitStability::stable);

    CHECK(analyze_row(0.8).tau_c == Approx(0.025270344749999361).epsilon(1e-10));
    CHECK(analyze_row(1.0).tau_c == Approx(0.020881174473004818).epsilon(1e-10));
}

TEST_CASE("failing rows are recorded, not thrown", "[sweep_report]") {
    SweepRow row;
    REQUIRE_NOTHROW(row = analyze_row(1.5));
    CHECK_FALSE(row.ok);
    CHECK(row.error_kind == "domain");
    CHECK_FALSE(row.error_message.empty());

    const std::string csv = csv_of({analyze_row(0.0), row});
    CHECK(csv.find("1.5,nan,nan,nan,nan,nan,nan,nan,failed,domain") != std::string::npos);
    const SweepVerdicts v = summarize({analyze_row(0.0), row});
    CHECK_FALSE(v.all_rows_ok);
    CHECK(v.failed_rows == 1);
}

TEST_CASE("alpha sweep verdicts", "[sweep_report]") {
    const auto rows = alpha_sweep(21);
    REQUIRE(rows.size() == 21);
    CHECK(rows.front().alpha == 0.0);
    CHECK(rows.back().alpha == 1.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].alpha > rows[i - 1].alpha);
        CHECK(rows[i].tau_c < rows[i - 1].tau_c);
        CHECK(rows[i].nu0 > rows[i - 1].nu0);
    }
    const SweepVerdicts v = summarize(rows);
    CHECK(v.all_rows_ok);
    CHECK(v.tau_c_decreasing);
    CHECK(v.delta_positive);
    CHECK(v.fprime_positive);
    CHECK(v.beta2_negative);
    CHECK(v.mu2_positive);
    CHECK(v.sign_agreement);
    CHECK(v.failed_rows == 0);
}

TEST_CASE("sweep output is deterministic across runs and thread counts", "[sweep_report][property]") {
    const std::string one = csv_of(alpha_sweep(11, std::nullopt, 1));
    CHECK(csv_of(alpha_sweep(11, std::nullopt, 1)) == one);
    CHECK(csv_of(alpha_sweep(11, std::nullopt, 4)) == one);
    CHECK(csv_of(alpha_sweep(11, std::nullopt, 0)) == one);
}

TEST_CASE("sweep csv layout", "[sweep_report]") {
    const std::string csv = csv_of(alpha_sweep(3));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,tau_c,nu0,delta,fprime,beta2,mu2,t2,direction,stability");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.find("supercritical,stable") != std::string::npos);
    }
    CHECK(rows == 3);

    std::ostringstream svg;
    write_sweep_svg(svg, alpha_sweep(3));
    CHECK(svg.str().find("<polyline") != std::string::npos);
}

TEST_CASE("sweep rejects a single point", "[sweep_report]") {
    CHECK_THROWS_AS(alpha_sweep(1), DomainError);
}

TEST_CASE("regimes on either side of the critical delay", "[sweep_report][simulation]") {
    RegimeOptions opts;
    opts.t_end = 400.0;
    const auto r = verify_regimes(0.0, {-0.08, 0.005}, opts);
    REQUIRE(r.size() == 2);
    CHECK(r[0].regime == Regime::converged);
    CHECK(r[0].tau == Approx(0.92 * 0.12078499838151675));
    CHECK(regime_matches_offset(r[0]));
    CHECK(r[1].regime == Regime::oscillating);
    CHECK(regime_matches_offset(r[1]));
    CHECK(r[1].metrics.period == Approx(2 * std::numbers::pi / 16.67731935313656).epsilon(0.02));

    CHECK_THROWS_AS(verify_regimes(0.0, {0.0}), DomainError);
}

TEST_CASE("undelayed regime converges", "[sweep_report][simulation]") {
    const RegimeResult r = simulate_regime(0.5, 0.0);
    CHECK(r.regime == Regime::converged);
    CHECK(r.metrics.final_distance_to_target < 1e-6);
}

TEST_CASE("Lu system just past onset oscillates", "[sweep_report][simulation]") {
    const RegimeResult r = simulate_regime(0.8, 0.0255);
    CHECK(r.regime == Regime::oscillating);
    CHECK_FALSE(r.blowup_time);
}

TEST_CASE("Chen system at tau = 0.022 oscillates", "[sweep_report][simulation][!mayfail]") {
    // 5.4 % above onset the Chen loop leaves the basin of the small cycle.
    const RegimeResult r = simulate_regime(1.0, 0.022);
    CHECK(r.regime == Regime::oscillating);
}

TEST_CASE("divergence is a regime, not an exception", "[sweep_report][simulation]") {
    RegimeResult r;
    REQUIRE_NOTHROW(r = simulate_regime(1.0, 0.022));
    if (r.regime == Regime::diverged) {
        REQUIRE(r.blowup_time);
        CHECK(*r.blowup_time > 0.0);
    }
}

TEST_CASE("regime names", "[sweep_report]") {
    CHECK(std::string(to_string(Regime::converged)) == "converged");
    CHECK(std::string(to_string(Regime::oscillating)) == "oscillating");
    CHECK(std::string(to_string(Regime::diverged)) == "diverged");
    CHECK(std::string(to_string(Regime::indeterminate)) == "indeterminate");
}
