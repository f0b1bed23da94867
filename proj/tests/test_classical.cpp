// classical: mean-field energy surface, flow, sections

#include "doctest.h"

#include "tpdicke/classical.hpp"
#include "tpdicke/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tpdicke;
using doctest::Approx;

namespace {
ModelParams make(double omega, double omega0, double gamma) {
    ModelParams p;
    p.omega = omega;
    p.omega0 = omega0;
    p.gamma = gamma;
    p.two_j = 30;
    p.n_max = 2;
    return p;
}
const ModelParams kRef = make(1, 2, 0.3);
} // namespace

TEST_CASE("energy surface") {
    CHECK(h_classical({0, 0, 0, 0}, kRef) == -2.0);
    CHECK(h_classical({2, 0, 0, 0}, kRef) == Approx(0.0).epsilon(1e-15));
    const auto free = make(1.3, 0.7, 0.0);
    const ClassicalState x{0.4, -0.3, 1.1, 0.2};
    CHECK(h_classical(x, free) ==
          Approx(0.65 * (0.16 + 0.09) + 0.35 * (1.21 + 0.04) - 0.7).epsilon(1e-15));
    // explicit coupling term
    const ClassicalState y{0.5, 0.2, 1.0, 0.5};
    const double f = std::sqrt(1 - (1.0 + 0.25) / 4);
    CHECK(h_classical(y, kRef) ==
          Approx(0.5 * 0.29 + 1.0 * 1.25 - 2.0 + 0.3 * (0.25 - 0.04) * 1.0 * f).epsilon(1e-15));
    CHECK_THROWS_AS(h_classical({0, 0, 2.0, 0.1}, kRef), DomainViolation);
    CHECK_NOTHROW(h_classical({0, 0, 2.0, 0.0}, kRef));
}

TEST_CASE("gradient") {
    const auto g0 = gradient({0, 0, 0, 0}, kRef);
    CHECK(g0.dq == 0.0);
    CHECK(g0.dp == 0.0);
    CHECK(g0.dQ == 0.0);
    CHECK(g0.dP == 0.0);
    const auto free = make(1.3, 0.7, 0.0);
    const auto g = gradient({0.4, -0.3, 1.1, 0.2}, free);
    CHECK(g.dq == Approx(1.3 * 0.4));
    CHECK(g.dp == Approx(1.3 * -0.3));
    CHECK(g.dQ == Approx(0.7 * 1.1));
    CHECK(g.dP == Approx(0.7 * 0.2));
    CHECK_THROWS_AS(gradient({0, 0, 2.0, 0.0}, kRef), BoundarySingularity);
    CHECK_THROWS_AS(gradient({0, 0, 2.0, 0.5}, kRef), DomainViolation);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double r = 1.9 * std::sqrt(u(rng)), th = 2 * std::numbers::pi * u(rng);
        const ClassicalState x{4 * u(rng) - 2, 4 * u(rng) - 2, r * std::cos(th), r * std::sin(th)};
        const auto a = gradient(x, kRef);
        const double h = 1e-6;
        auto shift = [&](int c, double d) {
            auto v = x.as_array();
            v[static_cast<std::size_t>(c)] += d;
            return h_classical(ClassicalState::from_array(v), kRef);
        };
        const double exact[4] = {a.dq, a.dp, a.dQ, a.dP};
        double scale = 1.0;
        for (double e : exact) scale = std::max(scale, std::abs(e));
        for (int c = 0; c < 4; ++c) CHECK(std::abs((shift(c, h) - shift(c, -h)) / (2 * h) - exact[c]) <= 1e-6 * scale);
    }
}

TEST_CASE("equations of motion") {
    const auto x = ClassicalState{0.3, 0.2, 0.5, -0.4};
    const auto g = gradient(x, kRef);
    const auto v = equations_of_motion(x, kRef);
    CHECK(v.dq == g.dp);
    CHECK(v.dp == -g.dq);
    CHECK(v.dQ == g.dP);
    CHECK(v.dP == -g.dQ);
    const auto o = equations_of_motion({0, 0, 0, 0}, kRef);
    CHECK((o.dq == 0.0 && o.dp == 0.0 && o.dQ == 0.0 && o.dP == 0.0));
    // the flow is tangent to the energy shell
    CHECK(g.dq * v.dq + g.dp * v.dp + g.dQ * v.dQ + g.dP * v.dP == Approx(0.0).scale(1.0));
}

TEST_CASE("positive root on the shell") {
    CHECK(q_plus(0.0, 0.0, 0.0, 0.0, kRef) == Approx(2.0).epsilon(1e-15));
    CHECK(q_plus(-2.0, 0.0, 0.0, 0.0, kRef) == 0.0);
    CHECK_THROWS_AS(q_plus(-2.5, 0.0, 0.0, 0.0, kRef), OutsideShell);
    const ClassicalState x{0.8, 0.3, -0.6, 1.2};
    CHECK(q_plus(h_classical(x, kRef), x.p, x.Q, x.P, kRef) == Approx(0.8).epsilon(1e-12));
    ModelParams collapsed = kRef;
    collapsed.gamma = 0.5;
    CHECK_THROWS_AS(q_plus(0.0, 0.0, 0.0, 0.0, collapsed), SpectralCollapse);
}

TEST_CASE("shell sampling") {
    SUBCASE("ground shell collapses onto the fixed point") {
        const auto s = sample_shell(-2.0 + 1e-6, {ShellGrid::Mode::Grid, 401}, kRef, 1);
        for (const auto& x : s) {
            CHECK(std::abs(x.q) < 0.01);
            CHECK(x.atomic_radius2() < 1e-4);
        }
    }
    SUBCASE("high shell admits nearly every disk point") {
        const auto s = sample_shell(10.0, {ShellGrid::Mode::Grid, 101}, kRef, 1);
        std::size_t disk = 0;
        for (int i = 0; i < 101; ++i)
            for (int k = 0; k < 101; ++k) {
                const double Q = -2 + 4.0 * i / 100, P = -2 + 4.0 * k / 100;
                disk += Q * Q + P * P < 4.0;
            }
        CHECK(static_cast<double>(s.size()) >= 0.99 * static_cast<double>(disk));
        for (const auto& x : s) {
            CHECK(x.p == 0.0);
            CHECK(x.q >= 0.0);
            CHECK(h_classical(x, kRef) == Approx(10.0).epsilon(1e-12));
        }
    }
    SUBCASE("fixed seed replays") {
        const auto a = sample_shell(1.0, {ShellGrid::Mode::Random, 25}, kRef, 42);
        const auto b = sample_shell(1.0, {ShellGrid::Mode::Random, 25}, kRef, 42);
        REQUIRE(a.size() == 25);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].as_array() == b[i].as_array());
    }
    SUBCASE("below the ground shell") {
        CHECK_THROWS_AS(sample_shell(-2.5, {ShellGrid::Mode::Random, 5}, kRef, 1), EmptyShell);
    }
}

TEST_CASE("integration") {
    const IntegratorTolerance tol;
    SUBCASE("decoupled rotations") {
        const auto free = make(1.0, 0.7, 0.0);
        const ClassicalState x0{1.0, 0.0, 0.5, 0.0};
        const double period = 2 * std::numbers::pi;
        const auto t = integrate(x0, period, tol, free);
        CHECK(t.times.back() == period);
        for (const auto& x : t.states) CHECK(x.q * x.q + x.p * x.p == Approx(1.0).epsilon(1e-10));
        CHECK(t.states.back().q == Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(t.states.back().p) <= 1e-9);
        CHECK(t.states.back().Q == Approx(0.5 * std::cos(0.7 * period)).epsilon(1e-9));
    }
    SUBCASE("energy drift and time reversal") {
        const auto x0 = sample_shell(1.0, {ShellGrid::Mode::Random, 1}, kRef, 3).front();
        // short horizon: at ε = 1 the flow is partly chaotic and amplifies
        // round-off roughly as e^{0.2 t}
        const auto fwd = integrate(x0, 20.0, tol, kRef);
        CHECK(fwd.energy_drift <= 1e-8);
        const auto back = integrate(fwd.states.back(), -20.0, tol, kRef).states.back();
        CHECK(std::abs(back.q - x0.q) + std::abs(back.p - x0.p) + std::abs(back.Q - x0.Q) + std::abs(back.P - x0.P) <=
              1e-6);
    }
    SUBCASE("omega0 = 0 conserves j_x") {
        const auto p = make(1, 0, 0.3);
        const auto x0 = sample_shell(2.0, {ShellGrid::Mode::Random, 1}, p, 9).front();
        const auto t = integrate(x0, 300.0, tol, p);
        const double jx0 = jx_classical(x0.Q, x0.P);
        for (const auto& x : t.states) CHECK(std::abs(jx_classical(x.Q, x.P) - jx0) <= 1e-8);
    }
    SUBCASE("starting outside the disk") {
        CHECK_THROWS_AS(integrate({0, 0, 2.1, 0}, 1.0, tol, kRef), DomainViolation);
    }
}

TEST_CASE("Poincare sections") {
    const IntegratorTolerance tol;
    SUBCASE("decoupled crossings lie on one circle") {
        const auto free = make(1.0, std::sqrt(2.0), 0.0);
        const ClassicalState x0{1.0, 0.0, 0.9, 0.3};
        const auto pts = poincare_section(x0, 200.0, tol, free);
        CHECK(pts.size() >= 30);
        for (const auto& s : pts) CHECK(s.Q * s.Q + s.P * s.P == Approx(0.9).epsilon(1e-9));
        // stroboscopic at the field period
        for (std::size_t i = 1; i < pts.size(); ++i)
            CHECK(pts[i].t - pts[i - 1].t == Approx(2 * std::numbers::pi).epsilon(1e-9));
    }
    SUBCASE("crossings are on the surface with the right orientation") {
        const auto x0 = sample_shell(1.0, {ShellGrid::Mode::Random, 1}, kRef, 5).front();
        const auto traj = integrate(x0, 200.0, tol, kRef);
        const auto a = poincare_section(x0, 200.0, tol, kRef);
        const auto b = poincare_section(traj, tol, kRef);
        REQUIRE(a.size() == b.size());
        REQUIRE(!a.empty());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].t == Approx(b[i].t).epsilon(1e-8));
            CHECK(a[i].Q == Approx(b[i].Q).epsilon(1e-8));
            const double q = q_plus(1.0, 0.0, a[i].Q, a[i].P, kRef);
            CHECK(q > 0.0);
        }
        CHECK(poincare_section(x0, 200.0, tol, kRef, 3).size() == 3);
    }
    SUBCASE("run variant never throws on a domain exit") {
        const auto xs = sample_shell(10.0, {ShellGrid::Mode::Random, 5}, kRef, 42);
        for (const auto& x : xs) {
            const auto run = poincare_section_run(x, 200.0, tol, kRef);
            if (run.domain_exit) {
                CHECK(run.t_end < 200.0);
                CHECK_FALSE(run.exit_reason.empty());
            } else {
                CHECK(run.t_end == 200.0);
            }
        }
    }
}

TEST_CASE("accessible region and occupancy") {
    CHECK(available_radius(10.0, kRef) == 2.0);
    CHECK(available_radius(-1.0, kRef) == Approx(1.0));
    const auto edge = disk_boundary(8);
    REQUIRE(edge.size() == 8);
    for (const auto& b : edge) CHECK(b.Q * b.Q + b.P * b.P == Approx(4.0));
    const auto bnd = available_boundary(-1.0, kRef, 36);
    REQUIRE(bnd.size() == 36);
    for (const auto& b : bnd) CHECK_NOTHROW(q_plus(-1.0, 0.0, 0.999 * b.Q, 0.999 * b.P, kRef));
    CHECK(section_occupancy({}, 1.0, 10) == 0.0);
    CHECK(section_occupancy({{0.0, 0.05, 0.05}}, 1.0, 10) > 0.0);
}
