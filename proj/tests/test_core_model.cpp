#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lorenz_lab/core_model.hpp"
#include "lorenz_lab/errors.hpp"

using namespace lorenz_lab;
using Catch::Approx;

TEST_CASE("family parameters at the named members", "[core_model]") {
    const AlphaParams lorenz = params_from_alpha(0.0);
    CHECK(lorenz.sigma == 10.0);
    CHECK(lorenz.r == 28.0);
    CHECK(lorenz.b == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(lorenz.gamma == -1.0);

    const AlphaParams lu = params_from_alpha(0.8);
    CHECK(lu.sigma == Approx(30.0).epsilon(1e-15));
    CHECK(lu.r == Approx(0.0).margin(1e-14));
    CHECK(lu.b == Approx(8.8 / 3.0).epsilon(1e-15));
    CHECK(lu.gamma == Approx(22.2).epsilon(1e-15));

    const AlphaParams chen = params_from_alpha(1.0);
    CHECK(chen.sigma == 35.0);
    CHECK(chen.r == -7.0);
    CHECK(chen.b == 3.0);
    CHECK(chen.gamma == 28.0);
}

TEST_CASE("alpha outside the unit interval is rejected", "[core_model]") {
    CHECK_THROWS_AS(params_from_alpha(-0.01), DomainError);
    CHECK_THROWS_AS(params_from_alpha(1.5), DomainError);
    CHECK_THROWS_AS(params_from_alpha(std::nan("")), DomainError);
    CHECK_NOTHROW(params_from_alpha(1.0));
}

TEST_CASE("equilibria", "[core_model]") {
    const EquilibriumSet e0 = equilibria(params_from_alpha(0.0));
    CHECK(e0.e_plus.x == Approx(std::sqrt(72.0)).epsilon(1e-15));
    CHECK(e0.e_plus.y == Approx(std::sqrt(72.0)).epsilon(1e-15));
    CHECK(e0.e_plus.z == Approx(27.0).epsilon(1e-15));
    CHECK(e0.e_minus.x == Approx(-std::sqrt(72.0)).epsilon(1e-15));
    CHECK(e0.e0 == State{0, 0, 0});

    const EquilibriumSet e1 = equilibria(params_from_alpha(1.0));
    CHECK(e1.e_plus.x == Approx(std::sqrt(63.0)).epsilon(1e-15));
    CHECK(e1.e_plus.z == Approx(21.0).epsilon(1e-15));
}

TEST_CASE("equilibria are fixed points of the open loop on a 101-point grid", "[core_model][property]") {
    for (int k = 0; k <= 100; ++k) {
        const AlphaParams p = params_from_alpha(k / 100.0);
        const EquilibriumSet e = equilibria(p);
        for (const State& s : {e.e0, e.e_plus, e.e_minus}) {
            CHECK(norm(uncontrolled_rhs(p, s)) < 1e-10);
        }
    }
}

TEST_CASE("open-loop field by hand", "[core_model]") {
    const State a = uncontrolled_rhs(params_from_alpha(0.0), State{1, 0, 0});
    CHECK(a == State{-10, 28, 0});
    const State b = uncontrolled_rhs(params_from_alpha(1.0), State{0, 1, 0});
    CHECK(b == State{35, 28, 0});
}

TEST_CASE("closed-loop field", "[core_model]") {
    const AlphaParams p = params_from_alpha(0.0);
    const RegulationTarget t = RegulationTarget::e_plus(p);
    CHECK(t.z_star == Approx(27.0).epsilon(1e-15));

    SECTION("target is a fixed point") {
        const State s = t.point();
        CHECK(norm(controlled_rhs(p, t, s, s)) < 1e-12);
    }
    SECTION("hand-evaluated sample") {
        const double xr = std::sqrt(72.0);
        const State f = controlled_rhs(p, t, State{1, 2, 3}, State{0, 0, 0});
        CHECK(f.x == Approx(10.0));
        CHECK(f.y == Approx(23.0 + 10.0 * xr).epsilon(1e-14));
        CHECK(f.z == Approx(-6.0));
    }
    SECTION("undelayed closed loop") {
        const State s{3.5, -2.0, 11.0};
        const State f = controlled_rhs(p, t, s, s);
        CHECK(f.x == Approx(p.sigma * (s.y - s.x)));
        CHECK(f.y == Approx(p.sigma * (t.x_r - s.y)));
        CHECK(f.z == Approx(s.x * s.y - p.b * s.z));
    }
}

TEST_CASE("undelayed closed loop is linear in (x, y) with matrix [[-s, s], [0, -s]]", "[core_model][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const AlphaParams p = params_from_alpha((i % 11) / 10.0);
        const RegulationTarget t = RegulationTarget::e_plus(p);
        const State s{u(rng), u(rng), u(rng)};
        const State f = controlled_rhs(p, t, s, s);
        const double dx = s.x - t.x_r;
        const double dy = s.y - t.x_r;
        CHECK(f.x == Approx(-p.sigma * dx + p.sigma * dy).margin(1e-12));
        CHECK(f.y == Approx(-p.sigma * dy).margin(1e-12));
    }
}

TEST_CASE("control signal", "[core_model]") {
    SECTION("vanishes at the target") {
        const AlphaParams p = params_from_alpha(0.0);
        const RegulationTarget t = RegulationTarget::e_plus(p);
        CHECK(control_signal(p, t, t.point()) == Approx(0.0).margin(1e-12));
    }
    SECTION("zero delayed state leaves sigma x_r") {
        for (double a : {0.0, 0.3, 1.0}) {
            const AlphaParams p = params_from_alpha(a);
            const RegulationTarget t = RegulationTarget::e_plus(p);
            CHECK(control_signal(p, t, State{0, 0, 0}) == Approx(p.sigma * t.x_r));
        }
    }
    SECTION("hand-evaluated sample") {
        const AlphaParams p = params_from_alpha(1.0);
        const RegulationTarget t = RegulationTarget::e_plus(p);
        CHECK(control_signal(p, t, State{1, 1, 1}) == Approx(7.0 + 1.0 - 28.0 - 35.0 * (1.0 - std::sqrt(63.0))));
    }
}

TEST_CASE("closed loop = open loop + control on the y equation", "[core_model][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::uniform_real_distribution<double> a(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const AlphaParams p = params_from_alpha(a(rng));
        const RegulationTarget t = RegulationTarget::e_plus(p);
        const State s{u(rng), u(rng), u(rng)};
        const State d{u(rng), u(rng), u(rng)};
        const State open = uncontrolled_rhs(p, s);
        const State closed = controlled_rhs(p, t, s, d);
        const double scale = 1.0 + std::abs(open.y) + std::abs(control_signal(p, t, d));
        CHECK(closed.x == open.x);
        CHECK(std::abs(closed.y - (open.y + control_signal(p, t, d))) < 1e-12 * scale);
        CHECK(closed.z == open.z);
    }
}

TEST_CASE("custom regulation target", "[core_model]") {
    const AlphaParams p = params_from_alpha(0.5);
    const RegulationTarget t = RegulationTarget::at(p, 4.0);
    CHECK(t.z_star == Approx(16.0 / p.b));
    CHECK(norm(controlled_rhs(p, t, t.point(), t.point())) < 1e-12);
}
