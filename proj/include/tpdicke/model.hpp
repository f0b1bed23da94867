// model.hpp: product basis, parity sectors, and operator matrices for the
// two-photon Dicke Hamiltonian
//
//   H = ω a†a + ω₀ J_z + (γ/N)(a†² + a²)(J₊ + J₋),   N = 2j
//
// Spins are carried as doubled integers (two_j, two_mz) so that half-integer
// j is exact. The product basis |n; j, m_z⟩ is ordered with n outer and m_z
// inner; that order is part of the eigenvector dump format.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tpdicke {

struct ModelParams {
    double omega{1.0};
    double omega0{0.0};
    double gamma{0.0};
    int two_j{1};
    int n_max{2};

    double j() const noexcept { return 0.5 * two_j; }
    // Number of two-level atoms, N = 2j.
    double atoms() const noexcept { return static_cast<double>(two_j); }

    // Throws InvalidParameters unless omega > 0, gamma >= 0, two_j >= 1,
    // n_max >= 2 and all values are finite.
    void validate() const;
    // validate() plus gamma < omega/2; throws SpectralCollapse otherwise.
    void require_normal_phase() const;
};

struct BasisState {
    int n{0};
    int two_mz{0};

    double mz() const noexcept { return 0.5 * two_mz; }
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

// Eigenvalue class of the parity operator exp(iπΛ), Λ = a†a/2 + J_z + j.
// The underlying value is the residue (n + 2m_z + 2j) mod 4.
enum class ParitySector : int { Plus1 = 0, PlusI = 1, Minus1 = 2, MinusI = 3 };

inline constexpr ParitySector kAllSectors[] = {ParitySector::Plus1, ParitySector::PlusI,
                                               ParitySector::Minus1, ParitySector::MinusI};

inline int residue(ParitySector s) noexcept { return static_cast<int>(s); }
std::string to_string(ParitySector s);
// Accepts "+1", "1", "-1", "+i", "i", "-i" (optionally prefixed by "p=").
std::optional<ParitySector> parse_sector(std::string_view text);
// "full" for the unrestricted basis.
std::string basis_label(std::optional<ParitySector> tag);

enum class Observable { NumberOp, Jz, Jx, Jx2, JSquared };

std::string to_string(Observable op);

// Real symmetric matrix stored as its upper triangle in coordinate form,
// sorted row-major with duplicate coordinates merged.
class SymmetricOperator {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };

    SymmetricOperator() = default;
    // Entries may be given for either triangle; (i, j) and (j, i) address the
    // same element and are summed.
    SymmetricOperator(std::size_t dim, std::optional<ParitySector> basis_tag,
                      std::vector<Entry> entries);

    std::size_t dim() const noexcept { return dim_; }
    std::optional<ParitySector> basis_tag() const noexcept { return tag_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    double at(std::size_t row, std::size_t col) const;
    Eigen::MatrixXd dense() const;
    // y = A x
    void apply(std::span<const double> x, std::span<double> y) const;
    // xᵀ A x
    double expectation(std::span<const double> x) const;
    // Largest |entry| of the stored triangle.
    double max_abs() const noexcept;

    // this + scale·other; basis tags and dimensions must agree.
    SymmetricOperator plus_scaled(const SymmetricOperator& other, double scale) const;

private:
    std::size_t dim_{0};
    std::optional<ParitySector> tag_;
    std::vector<Entry> entries_;
};

std::size_t basis_size(const ModelParams& params);
// Position of |n, m_z⟩ in the full product basis.
std::size_t full_index(const BasisState& state, const ModelParams& params);

std::vector<BasisState> build_basis(const ModelParams& params);
// Full-basis states restricted to one sector, in full-basis order.
std::vector<BasisState> sector_basis(const ModelParams& params, ParitySector sector);
std::vector<BasisState> basis_for(const ModelParams& params, std::optional<ParitySector> tag);

ParitySector parity_class(const BasisState& state, const ModelParams& params);

SymmetricOperator hamiltonian(const ModelParams& params,
                              std::optional<ParitySector> sector = std::nullopt);

// Throws SectorMismatch when Jx is requested with a sector restriction.
SymmetricOperator observable(const ModelParams& params, Observable which,
                             std::optional<ParitySector> sector = std::nullopt);

// H + ε J_x in the full basis.
SymmetricOperator perturbed_hamiltonian(const ModelParams& params, double epsilon);

// a†² + a² ⊗ 1. It maps parity p onto −p, so a sector request throws
// SectorMismatch.
SymmetricOperator photon_pair(const ModelParams& params,
                              std::optional<ParitySector> sector = std::nullopt);

// Spin-only (2j+1)×(2j+1) matrix of J_x in the |j, m_z⟩ basis, m_z ascending.
Eigen::MatrixXd spin_jx(int two_j);

} // namespace tpdicke
