#include "lorenz_lab/sweep_report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "lorenz_lab/errors.hpp"
#include "lorenz_lab/report.hpp"

namespace lorenz_lab {

SweepRow analyze_row(double alpha, std::optional<double> x_r) {
    SweepRow row;
    row.alpha = alpha;
    try {
        const AlphaParams p = params_from_alpha(alpha);
        const RegulationTarget target = x_r ? RegulationTarget::at(p, *x_r) : RegulationTarget::e_plus(p);
        const HopfPoint hp = hopf_point(p, target);
        const NormalForm nf = classify(hp);
        const AuxCubic aux = build_aux_cubic(build_char_poly(p, target));
        row.tau_c = nf.tau_c;
        row.nu0 = nf.nu0;
        row.delta = aux.delta;
        row.fprime = transversality(aux, nf.nu0).value;
        row.re_lambda_prime = nf.lambda_prime.real();
        row.beta2 = nf.beta2;
        row.mu2 = nf.mu2;
        row.t2 = nf.t2;
        row.direction = nf.direction;
        row.stability = nf.orbit_stability;
        row.ok = true;
    } catch (const Error& e) {
        row.error_kind = e.kind();
        row.error_message = e.what();
    }
    return row;
}

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LORENZ_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) {
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

}  // namespace

std::vector<SweepRow> alpha_sweep(std::size_t n, std::optional<double> x_r, unsigned threads) {
    if (n < 2) {
        throw DomainError("alpha sweep needs n >= 2");
    }
    std::vector<SweepRow> rows(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            const double alpha = k + 1 == n ? 1.0 : static_cast<double>(k) / static_cast<double>(n - 1);
            rows[k] = analyze_row(alpha, x_r);
        }
    };
    const unsigned workers = worker_count(threads, n);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    return rows;
}

SweepVerdicts summarize(const std::vector<SweepRow>& rows) {
    SweepVerdicts v;
    v.failed_rows = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
    v.all_rows_ok = v.failed_rows == 0 && !rows.empty();
    auto every = [&](auto pred) { return v.all_rows_ok && std::all_of(rows.begin(), rows.end(), pred); };
    v.delta_positive = every([](const SweepRow& r) { return r.delta > 0.0; });
    v.fprime_positive = every([](const SweepRow& r) { return r.fprime > 0.0; });
    v.beta2_negative = every([](const SweepRow& r) { return r.beta2 < 0.0; });
    v.mu2_positive = every([](const SweepRow& r) { return r.mu2 > 0.0; });
    v.sign_agreement = every([](const SweepRow& r) { return r.fprime > 0.0 && r.re_lambda_prime > 0.0; });
    v.tau_c_decreasing = v.all_rows_ok;
    for (std::size_t k = 1; k < rows.size() && v.tau_c_decreasing; ++k) {
        v.tau_c_decreasing = rows[k].tau_c < rows[k - 1].tau_c;
    }
    return v;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "alpha,tau_c,nu0,delta,fprime,beta2,mu2,t2,direction,stability\n";
    char buf[512];
    for (const SweepRow& r : rows) {
        if (r.ok) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n", r.alpha, r.tau_c,
                          r.nu0, r.delta, r.fprime, r.beta2, r.mu2, r.t2, to_string(r.direction),
                          to_string(r.stability));
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,nan,nan,nan,nan,nan,nan,nan,failed,%s\n", r.alpha,
                          r.error_kind.c_str());
        }
        out << buf;
    }
}

void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRow& r : rows) {
        if (r.ok) {
            xs.push_back(r.alpha);
            ys.push_back(r.tau_c);
        }
    }
    write_polyline_svg(out, xs, ys, "critical delay against alpha", "alpha", "tau_c", false);
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::converged:
            return "converged";
        case Regime::oscillating:
            return "oscillating";
        case Regime::diverged:
            return "diverged";
        case Regime::indeterminate:
            break;
    }
    return "indeterminate";
}

RegimeResult simulate_regime(double alpha, double tau, const RegimeOptions& opts) {
    const AlphaParams p = params_from_alpha(alpha);
    const RegulationTarget target = RegulationTarget::e_plus(p);
    RegimeResult out;
    out.tau = tau;
    try {
        const Trajectory traj =
            tau > 0.0 ? integrate_dde(p, target, tau, opts.initial, tau / static_cast<double>(opts.steps_per_delay),
                                      opts.t_end)
                      : integrate_ode(p, target, opts.initial, 1e-3, opts.t_end);
        out.metrics = oscillation_metrics(traj, target, opts.tail_fraction);
        out.regime = out.metrics.converged     ? Regime::converged
                     : out.metrics.oscillating ? Regime::oscillating
                                               : Regime::indeterminate;
    } catch (const DivergenceError& e) {
        out.regime = Regime::diverged;
        out.blowup_time = e.blowup_time();
    }
    return out;
}

std::vector<RegimeResult> verify_regimes(double alpha, const std::vector<double>& offsets, const RegimeOptions& opts) {
    const AlphaParams p = params_from_alpha(alpha);
    const HopfPoint hp = hopf_point(p, RegulationTarget::e_plus(p));
    std::vector<RegimeResult> out;
    out.reserve(offsets.size());
    for (double offset : offsets) {
        if (offset == 0.0) {
            throw DomainError("regime offsets must be nonzero");
        }
        RegimeResult r = simulate_regime(alpha, hp.tau_c * (1.0 + offset), opts);
        r.offset = offset;
        out.push_back(r);
    }
    return out;
}

bool regime_matches_offset(const RegimeResult& r) {
    return r.offset < 0.0 ? r.regime == Regime::converged : r.regime == Regime::oscillating;
}

}  // namespace lorenz_lab
