// eigensolve.hpp: dense symmetric diagonalization and the truncation
// convergence filter
//
// An eigenstate |E_k⟩ = Σ c_{n,m_z} |n; j, m_z⟩ is considered unaffected by
// the photon cutoff when P_{n_max} + P_{n_max−1} ≤ δ, with P_n = Σ_{m_z} c².
// States are checked in ascending energy and the first failure ends the
// converged set.

#pragma once

#include "tpdicke/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace tpdicke {

inline constexpr double kDefaultConvergenceDelta = 1e-6;

struct SpectrumResult {
    std::optional<ParitySector> sector;    // nullopt: full product basis
    std::vector<BasisState> basis;         // row order of `vectors`
    std::vector<double> energies;          // ascending
    std::optional<Eigen::MatrixXd> vectors; // column k is |E_k⟩
    std::size_t converged_count{0};
    ModelParams params;

    std::size_t dim() const noexcept { return energies.size(); }
    bool has_vectors() const noexcept { return vectors.has_value(); }
    // Converged energies only.
    std::vector<double> converged_energies() const;
};

struct PhotonDistribution {
    std::vector<double> probs; // P_n, n = 0..n_max
};

// Full eigendecomposition. converged_count is set to dim (no filter applied).
// The basis order is taken from `params` and the operator's basis tag.
// Throws NumericalFailure if LAPACK reports non-convergence.
SpectrumResult diagonalize(const SymmetricOperator& matrix, const ModelParams& params,
                           bool with_vectors = true);

PhotonDistribution photon_distribution(const SpectrumResult& result, std::size_t k);

std::size_t converged_count(const SpectrumResult& result, double delta = kDefaultConvergenceDelta);

// Builds H for one sector (or the full basis), diagonalizes it and records
// the converged watermark.
SpectrumResult solve(const ModelParams& params, std::optional<ParitySector> sector,
                     double delta = kDefaultConvergenceDelta);

} // namespace tpdicke
