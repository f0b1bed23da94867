// integrable.cpp: Bogoliubov data, collapse thresholds, analytic levels

#include "tpdicke/integrable.hpp"

#include "tpdicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tpdicke {

BogoliubovData bogoliubov(const ModelParams& params, int two_mx) {
    params.validate();
    if (std::abs(two_mx) > params.two_j || (two_mx + params.two_j) % 2 != 0)
        throw InvalidParameters("m_x=" + std::to_string(0.5 * two_mx) + " is not a projection of j");

    BogoliubovData b;
    b.two_mx = two_mx;
    // λ = 2γ m_x/(ωN) with m_x = two_mx/2
    b.lambda = params.gamma * two_mx / (params.omega * params.atoms());
    if (!(std::abs(b.lambda) < 0.5)) {
        std::ostringstream os;
        os << "|lambda|=" << std::abs(b.lambda) << " >= 1/2 for m_x=" << b.mx()
           << "; collapse coupling gamma_sc-x=" << gamma_collapse(params, two_mx);
        throw SpectralCollapse(os.str());
    }
    const double root = std::sqrt(1.0 - 4.0 * b.lambda * b.lambda);
    b.Omega = params.omega * root;
    // (root − 1)/(2λ) loses precision as λ → 0; the equivalent form
    // −2λ/(1 + root) is exact there and gives σ = 0 at λ = 0.
    b.sigma = -2.0 * b.lambda / (1.0 + root);
    return b;
}

double gamma_collapse(const ModelParams& params, int two_mx) {
    params.validate();
    if (two_mx == 0) throw Unbounded("the m_x = 0 block never collapses");
    return params.j() * params.omega / std::abs(static_cast<double>(two_mx));
}

double analytic_energy(const ModelParams& params, int n_c, int two_mx) {
    if (n_c < 0) throw InvalidParameters("n_c must be >= 0");
    const auto b = bogoliubov(params, two_mx);
    return b.Omega * (n_c + 0.5) - 0.5 * params.omega;
}

std::vector<double> AnalyticSpectrum::energies() const {
    std::vector<double> e;
    e.reserve(levels.size());
    for (const auto& l : levels) e.push_back(l.energy);
    return e;
}

AnalyticSpectrum analytic_spectrum(const ModelParams& params, int n_c_max) {
    params.require_normal_phase();
    if (n_c_max < 0) throw InvalidParameters("n_c_max must be >= 0");
    AnalyticSpectrum s;
    s.levels.reserve(static_cast<std::size_t>(n_c_max + 1) * static_cast<std::size_t>(params.two_j + 1));
    for (int two_mx = -params.two_j; two_mx <= params.two_j; two_mx += 2) {
        const auto b = bogoliubov(params, two_mx);
        for (int n_c = 0; n_c <= n_c_max; ++n_c)
            s.levels.push_back({n_c, two_mx, b.Omega * (n_c + 0.5) - 0.5 * params.omega});
    }
    std::sort(s.levels.begin(), s.levels.end(), [](const AnalyticLevel& a, const AnalyticLevel& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.two_mx != b.two_mx ? a.two_mx < b.two_mx : a.n_c < b.n_c;
    });
    return s;
}

EquivalenceReport compare_to_analytic(std::span<const double> numeric, const ModelParams& params) {
    params.require_normal_phase();
    for (std::size_t i = 1; i < numeric.size(); ++i)
        if (!(numeric[i] >= numeric[i - 1])) throw InvalidParameters("numeric levels must be sorted ascending");
    EquivalenceReport r;
    r.numeric.assign(numeric.begin(), numeric.end());
    if (numeric.empty()) return r;

    // The |m_x| = j ladder is the densest, with Ω_min = ω√(1 − 4γ²/ω²).
    const double ratio = params.gamma / params.omega;
    const double omega_min = params.omega * std::sqrt(1.0 - 4.0 * ratio * ratio);
    const double top = numeric.back();
    const int n_c_max = static_cast<int>(std::ceil((top + params.omega) / omega_min)) + 2;
    const auto levels = analytic_spectrum(params, n_c_max).energies();
    if (levels.size() < numeric.size())
        throw NumericalFailure("analytic ladder shorter than the numeric spectrum");

    r.analytic.assign(levels.begin(), levels.begin() + static_cast<long>(numeric.size()));
    r.rel_error.resize(numeric.size());
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        r.rel_error[k] = std::abs(numeric[k] - r.analytic[k]) / std::max(1.0, std::abs(r.analytic[k]));
        if (r.rel_error[k] > r.max_rel_error) {
            r.max_rel_error = r.rel_error[k];
            r.worst_index = k;
        }
    }
    const double cutoff = top - 1e-8 * std::max(1.0, std::abs(top));
    for (std::size_t k = numeric.size(); k < levels.size() && levels[k] < cutoff; ++k) ++r.unmatched_analytic;
    return r;
}

std::vector<OverlayPoint> overlay_curves(const ModelParams& params, int n_c_max,
                                         OverlayFamily family, int samples) {
    params.require_normal_phase();
    if (samples < 2) throw InvalidParameters("overlay curves need at least two samples");
    const double j = params.j();
    const double lambda_per_mx = 2.0 * params.gamma / (params.omega * params.atoms());
    auto energy = [&](double n_c, double mx) {
        const double l = lambda_per_mx * mx;
        return params.omega * std::sqrt(1.0 - 4.0 * l * l) * (n_c + 0.5) - 0.5 * params.omega;
    };

    std::vector<OverlayPoint> out;
    switch (family) {
    case OverlayFamily::FixedNcVsMx:
    case OverlayFamily::FixedNcVsMx2:
        for (int n_c = 0; n_c <= n_c_max; ++n_c) {
            const std::string id = "nc=" + std::to_string(n_c);
            for (int i = 0; i < samples; ++i) {
                const double t = static_cast<double>(i) / (samples - 1);
                if (family == OverlayFamily::FixedNcVsMx) {
                    const double mx = -j + 2.0 * j * t;
                    out.push_back({id, static_cast<double>(n_c), mx, energy(n_c, mx) / j});
                } else {
                    const double mx2 = j * j * t;
                    out.push_back({id, static_cast<double>(n_c), mx2, energy(n_c, std::sqrt(mx2)) / j});
                }
            }
        }
        break;
    case OverlayFamily::FixedMx2VsNc:
        for (int two_mx = params.two_j % 2; two_mx <= params.two_j; two_mx += 2) {
            const double mx = 0.5 * two_mx;
            std::ostringstream id;
            id << "mx2=" << mx * mx;
            for (int i = 0; i < samples; ++i) {
                const double n_c = n_c_max * static_cast<double>(i) / (samples - 1);
                out.push_back({id.str(), n_c, mx * mx, energy(n_c, mx) / j});
            }
        }
        break;
    }
    return out;
}

SymmetricOperator cdagc_operator(double sigma, int n_max) {
    if (!(std::abs(sigma) < 1.0)) throw InvalidParameters("squeezing parameter needs |sigma| < 1");
    if (n_max < 0) throw InvalidParameters("n_max must be >= 0");
    const double norm = 1.0 / (1.0 - sigma * sigma);
    std::vector<SymmetricOperator::Entry> entries;
    for (int n = 0; n <= n_max; ++n) {
        const auto k = static_cast<std::size_t>(n);
        entries.push_back({k, k, norm * ((1.0 + sigma * sigma) * n + sigma * sigma)});
        if (n + 2 <= n_max)
            entries.push_back({k, k + 2,
                               -norm * sigma * std::sqrt(static_cast<double>(n + 1) * (n + 2))});
    }
    return SymmetricOperator(static_cast<std::size_t>(n_max + 1), std::nullopt, std::move(entries));
}

} // namespace tpdicke
