// integrable.hpp: analytic spectrum of the ω₀ = 0 limit
//
// With ω₀ = 0 the Hamiltonian commutes with J_x. In each m_x block it is a
// single squeezed oscillator
//
//   H_{m_x} = Ω (c†c + ½) − ω/2,   Ω = ω √(1 − 4λ²),   λ = 2γ m_x / (ω N),
//   c = (a − σ a†)/√(1 − σ²),      σ = (Ω/ω − 1)/(2λ),
//
// taking the root of the Bogoliubov condition that keeps Ω positive.

#pragma once

#include "tpdicke/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace tpdicke {

struct BogoliubovData {
    int two_mx{0};
    double lambda{0.0};
    double Omega{0.0};
    double sigma{0.0};

    double mx() const noexcept { return 0.5 * two_mx; }
};

// Throws SpectralCollapse when |λ| ≥ ½ (the message names γ_sc-x).
BogoliubovData bogoliubov(const ModelParams& params, int two_mx);

// jω / (2|m_x|). Throws Unbounded for m_x = 0.
double gamma_collapse(const ModelParams& params, int two_mx);

// Ω_{m_x}(n_c + ½) − ω/2
double analytic_energy(const ModelParams& params, int n_c, int two_mx);

struct AnalyticLevel {
    int n_c;
    int two_mx;
    double energy;
};

// One sample of a continuous overlay curve. `abscissa` is m_x, m_x² or n_c
// depending on the curve family; epsilon = E/j.
struct OverlayPoint {
    std::string curve_id;
    double n_c;
    double mx_or_mx2;
    double epsilon;
};

enum class OverlayFamily {
    FixedNcVsMx,  // n_c discrete, m_x continuous in [−j, j]
    FixedNcVsMx2, // n_c discrete, m_x² continuous in [0, j²]
    FixedMx2VsNc  // m_x² discrete, n_c continuous in [0, n_c_max]
};

inline constexpr int kOverlaySamples = 512;

struct AnalyticSpectrum {
    std::vector<AnalyticLevel> levels; // sorted by energy, ties by (m_x, n_c)

    std::vector<double> energies() const;
};

// Every (n_c ≤ n_c_max, m_x ∈ {−j..j}) level. Requires γ < ω/2.
AnalyticSpectrum analytic_spectrum(const ModelParams& params, int n_c_max);

struct EquivalenceReport {
    std::vector<double> numeric;   // input levels, ascending
    std::vector<double> analytic;  // partner of each numeric level
    std::vector<double> rel_error; // |num − ana| / max(1, |ana|)
    double max_rel_error{0.0};
    std::size_t worst_index{0};
    // Analytic levels below the top numeric level left without a partner.
    std::size_t unmatched_analytic{0};
};

// Pairs an ascending list of numeric levels with the ω₀ = 0 analytic set in
// sorted order. Only ω, γ and j of params enter. Requires γ < ω/2.
EquivalenceReport compare_to_analytic(std::span<const double> numeric, const ModelParams& params);

// Continuous overlay curves for Peres-lattice plots.
std::vector<OverlayPoint> overlay_curves(const ModelParams& params, int n_c_max,
                                         OverlayFamily family, int samples = kOverlaySamples);

// Matrix of c†c = [(1+σ²) a†a − σ(a†² + a²) + σ²]/(1 − σ²) in the Fock
// basis |0⟩..|n_max⟩.
SymmetricOperator cdagc_operator(double sigma, int n_max);

} // namespace tpdicke
