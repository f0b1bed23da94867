// peres.hpp: Peres lattices and basis-dominance labels
//
// A Peres lattice is the set of points (E_k/j, ⟨E_k|O|E_k⟩) over converged
// eigenstates. Regular lattices signal integrable dynamics; scrambled ones
// signal chaos.

#pragma once

#include "tpdicke/eigensolve.hpp"
#include "tpdicke/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tpdicke {

enum class Dominance { XBasis, ZBasis };

std::string to_string(Dominance d);

struct PeresPoint {
    std::size_t k{0};
    double epsilon{0.0};
    double value{0.0};
    double value_over_j{0.0};
    double value_over_j2{0.0};
    std::optional<Dominance> dominance;
};

// One point per converged eigenstate. The operator must live on the result's
// basis, or on the full basis (sector eigenvectors are then embedded with
// zeros outside the sector). Anything else throws BasisMismatch.
std::vector<PeresPoint> peres_lattice(const SpectrumResult& result, const SymmetricOperator& op,
                                      const ModelParams& params);

// ⟨c†c⟩ per converged eigenstate with the squeezing parameter evaluated at the
// state's own ⟨J_x⟩, i.e. σ(λ = 2γ⟨J_x⟩/(ωN)). For definite-parity states
// ⟨J_x⟩ = 0 and this reduces to ⟨a†a⟩.
std::vector<PeresPoint> peres_cdagc(const SpectrumResult& result, const ModelParams& params);

struct DominanceWeights {
    double z_max; // max_{n,m_z} |⟨n, m_z|E_k⟩|²
    double x_max; // max_{n,m_x} |⟨n, m_x|E_k⟩|²
};

// Per eigenstate (all of them, not only converged ones).
std::vector<DominanceWeights> dominance_weights(const SpectrumResult& result);

// XBasis when x_max > z_max + threshold; ties go to ZBasis.
std::vector<Dominance> dominance_classify(const SpectrumResult& result, const ModelParams& params,
                                          double threshold = 0.0);

void attach_dominance(std::vector<PeresPoint>& points, const std::vector<Dominance>& labels);

} // namespace tpdicke
