// peres: lattices, c†c expectation, basis dominance

#include "doctest.h"
#include "oracles.hpp"

#include "tpdicke/eigensolve.hpp"
#include "tpdicke/errors.hpp"
#include "tpdicke/integrable.hpp"
#include "tpdicke/peres.hpp"

#include <algorithm>
#include <cmath>

using namespace tpdicke;
using doctest::Approx;

namespace {
ModelParams make(double omega, double omega0, double gamma, int two_j, int n_max) {
    ModelParams p;
    p.omega = omega;
    p.omega0 = omega0;
    p.gamma = gamma;
    p.two_j = two_j;
    p.n_max = n_max;
    return p;
}
} // namespace

TEST_CASE("decoupled Jz lattice is the product-state grid") {
    const auto p = make(1, 0.37, 0, 4, 8);
    const auto r = solve(p, std::nullopt);
    const auto pts = peres_lattice(r, observable(p, Observable::Jz), p);
    REQUIRE(pts.size() == r.converged_count);
    for (const auto& pt : pts) {
        const double mz = pt.value;
        CHECK(std::abs(2 * mz - std::round(2 * mz)) <= 1e-12);
        const double n = (pt.epsilon * p.j() - p.omega0 * mz) / p.omega;
        CHECK(std::abs(n - std::round(n)) <= 1e-12);
        CHECK(pt.value_over_j == Approx(mz / p.j()));
        CHECK(pt.value_over_j2 == Approx(mz / (p.j() * p.j())));
    }
}

TEST_CASE("sector eigenstates embed into full-basis operators") {
    const auto p = make(1, 0.5, 0.3, 5, 40);
    const auto full = solve(p, std::nullopt);
    const auto jx2 = observable(p, Observable::Jx2);
    const auto ref = peres_lattice(full, jx2, p);
    std::vector<std::pair<double, double>> pooled;
    for (auto s : kAllSectors) {
        const auto r = solve(p, s);
        const auto a = peres_lattice(r, jx2, p);
        const auto b = peres_lattice(r, observable(p, Observable::Jx2, s), p);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].value == Approx(b[k].value).epsilon(1e-12));
            pooled.emplace_back(a[k].epsilon, a[k].value);
        }
    }
    std::sort(pooled.begin(), pooled.end());
    // compare the lowest few, which are non-degenerate for these parameters
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(pooled[k].first == Approx(ref[k].epsilon).epsilon(1e-10));
        CHECK(pooled[k].second == Approx(ref[k].value).epsilon(1e-8));
    }
}

TEST_CASE("operator on a foreign basis is rejected") {
    const auto p = make(1, 0.5, 0.3, 2, 10);
    const auto r = solve(p, ParitySector::Plus1);
    CHECK_THROWS_AS(peres_lattice(r, observable(p, Observable::Jz, ParitySector::Minus1), p), BasisMismatch);
    const auto bare = diagonalize(hamiltonian(p), p, false);
    CHECK_THROWS_AS(peres_lattice(bare, observable(p, Observable::Jz), p), MissingVectors);
}

TEST_CASE("perturbed omega0 = 0 eigenstates sit on m_x values") {
    const auto p = make(1, 0, 0.3, 4, 80);
    const auto h = perturbed_hamiltonian(p, 1e-3);
    auto r = diagonalize(h, p);
    r.converged_count = converged_count(r, 1e-12);
    REQUIRE(r.converged_count > 50);
    const auto jx = peres_lattice(r, observable(p, Observable::Jx), p);
    for (const auto& pt : jx) CHECK(std::abs(pt.value - std::round(pt.value)) <= 1e-6);

    // c†c evaluated at the state's own m_x recovers the ladder index
    const auto nc = peres_cdagc(r, p);
    for (std::size_t k = 0; k < nc.size(); ++k) {
        const int two_mx = static_cast<int>(std::lround(2 * jx[k].value));
        // first-order shift ε m_x is exact: εJ_x commutes with H at ω₀ = 0
        const double e = analytic_energy(p, static_cast<int>(std::lround(nc[k].value)), two_mx) + 1e-3 * 0.5 * two_mx;
        CHECK(std::abs(nc[k].value - std::round(nc[k].value)) <= 1e-8);
        CHECK(std::abs(r.energies[k] - e) <= 1e-9 * std::max(1.0, std::abs(e)));
    }

    const auto dom = dominance_classify(r, p);
    for (std::size_t k = 0; k < r.converged_count; ++k) CHECK(dom[k] == Dominance::XBasis);
}

TEST_CASE("definite-parity c^dag c reduces to the photon number") {
    const auto p = make(1, 0.2, 0.3, 3, 30);
    const auto r = solve(p, ParitySector::MinusI);
    const auto a = peres_cdagc(r, p);
    const auto b = peres_lattice(r, observable(p, Observable::NumberOp), p);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].value == Approx(b[k].value).epsilon(1e-10));
}

TEST_CASE("decoupled eigenstates are z-dominated") {
    const auto p = make(1, 0.37, 0, 6, 10);
    const auto r = solve(p, std::nullopt);
    for (auto d : dominance_classify(r, p)) CHECK(d == Dominance::ZBasis);
    for (const auto& w : dominance_weights(r)) CHECK(w.z_max == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dominance weights are bounded by one") {
    const auto p = make(1, 0.3, 0.3, 5, 30);
    const auto r = solve(p, ParitySector::Plus1);
    for (const auto& w : dominance_weights(r)) {
        CHECK(w.z_max <= 1.0 + 1e-12);
        CHECK(w.x_max <= 1.0 + 1e-12);
        CHECK(w.z_max > 0.0);
    }
    auto pts = peres_lattice(r, observable(p, Observable::Jz), p);
    attach_dominance(pts, dominance_classify(r, p));
    for (const auto& pt : pts) CHECK(pt.dominance.has_value());
}

TEST_CASE("zero-photon band and ladder split at small omega0") {
    const auto p = make(1, 0.05, 0.3, 50, 200);
    const auto r = solve(p, ParitySector::Plus1);
    const auto n = peres_lattice(r, observable(p, Observable::NumberOp), p);
    const auto dom = dominance_classify(r, p);
    const std::size_t m = r.converged_count;
    REQUIRE(m > 500);
    std::size_t band = 0, band_z = 0, low_x = 0, high_x = 0;
    const std::size_t decile = m / 10;
    for (std::size_t k = 0; k < m; ++k) {
        if (n[k].value < 0.5 && r.energies[k] <= p.omega0 * p.j()) {
            ++band;
            band_z += dom[k] == Dominance::ZBasis;
        }
        if (k < decile) low_x += dom[k] == Dominance::XBasis;
        if (k >= m - decile) high_x += dom[k] == Dominance::XBasis;
    }
    INFO("band=" << band << " z=" << band_z << " low_x=" << low_x << " high_x=" << high_x << " decile=" << decile);
    CHECK(band >= 10);
    CHECK(band_z == band);
    CHECK(low_x == 0);
    CHECK(static_cast<double>(high_x) >= 0.6 * static_cast<double>(decile));
}

TEST_CASE("zero-photon band follows the m_z parabola at j = 15") {
    const auto p = make(1, 0.05, 0.3, 30, 100);
    std::size_t band = 0;
    for (auto s : kAllSectors) {
        const auto r = solve(p, s);
        const auto n = peres_lattice(r, observable(p, Observable::NumberOp), p);
        const auto x2 = peres_lattice(r, observable(p, Observable::Jx2), p);
        const auto z = peres_lattice(r, observable(p, Observable::Jz), p);
        const auto dom = dominance_classify(r, p);
        for (std::size_t k = 0; k < r.converged_count; ++k) {
            if (r.energies[k] > p.omega0 * p.j() + 0.5 * p.omega || n[k].value > 0.05 || dom[k] != Dominance::ZBasis)
                continue;
            ++band;
            const double predicted = 0.5 * (p.j() * (p.j() + 1) - z[k].value * z[k].value);
            CHECK(std::abs(x2[k].value - predicted) <= 0.05 * p.j() * p.j());
        }
    }
    CHECK(band >= 5);
}
