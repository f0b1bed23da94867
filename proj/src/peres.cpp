// peres.cpp: expectation-value lattices and x/z basis dominance

#include "tpdicke/peres.hpp"

#include "tpdicke/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace tpdicke {

namespace {

void require_vectors(const SpectrumResult& result) {
    if (!result.has_vectors()) throw MissingVectors("Peres lattices need eigenvectors");
}

// Eigenvector k of `result` expressed on the full product basis.
Eigen::VectorXd full_vector(const SpectrumResult& result, std::size_t k) {
    const auto& v = *result.vectors;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(result.params)));
    for (std::size_t i = 0; i < result.basis.size(); ++i)
        out(static_cast<Eigen::Index>(full_index(result.basis[i], result.params))) =
            v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    return out;
}

PeresPoint make_point(std::size_t k, double energy, double value, double j) {
    return {k, energy / j, value, value / j, value / (j * j), std::nullopt};
}

} // namespace

std::string to_string(Dominance d) { return d == Dominance::XBasis ? "x" : "z"; }

std::vector<PeresPoint> peres_lattice(const SpectrumResult& result, const SymmetricOperator& op,
                                      const ModelParams& params) {
    require_vectors(result);
    const bool same = op.basis_tag() == result.sector && op.dim() == result.basis.size();
    const bool embed = !op.basis_tag() && result.sector && op.dim() == basis_size(params);
    if (!same && !embed)
        throw BasisMismatch("operator on basis '" + basis_label(op.basis_tag()) +
                            "' cannot be evaluated on eigenvectors of basis '" +
                            basis_label(result.sector) + "'");

    std::vector<PeresPoint> points;
    points.reserve(result.converged_count);
    const auto& v = *result.vectors;
    for (std::size_t k = 0; k < result.converged_count; ++k) {
        double value = 0.0;
        if (same) {
            const auto col = v.col(static_cast<Eigen::Index>(k));
            value = op.expectation(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
        } else {
            const auto full = full_vector(result, k);
            value = op.expectation(std::span<const double>(full.data(), static_cast<std::size_t>(full.size())));
        }
        points.push_back(make_point(k, result.energies[k], value, params.j()));
    }
    return points;
}

std::vector<PeresPoint> peres_cdagc(const SpectrumResult& result, const ModelParams& params) {
    require_vectors(result);
    const auto number = peres_lattice(result, observable(params, Observable::NumberOp, result.sector), params);
    const auto pair = peres_lattice(result, photon_pair(params), params);
    const auto jx = peres_lattice(result, observable(params, Observable::Jx), params);

    std::vector<PeresPoint> points;
    points.reserve(number.size());
    for (std::size_t k = 0; k < number.size(); ++k) {
        const double lambda = 2.0 * params.gamma * jx[k].value / (params.omega * params.atoms());
        const double disc = 1.0 - 4.0 * lambda * lambda;
        if (!(disc > 0.0))
            throw SpectralCollapse("state " + std::to_string(k) + " has |lambda(<Jx>)| >= 1/2");
        const double sigma = -2.0 * lambda / (1.0 + std::sqrt(disc));
        const double s2 = sigma * sigma;
        const double value = ((1.0 + s2) * number[k].value - sigma * pair[k].value + s2) / (1.0 - s2);
        points.push_back(make_point(k, result.energies[k], value, params.j()));
    }
    return points;
}

std::vector<DominanceWeights> dominance_weights(const SpectrumResult& result) {
    require_vectors(result);
    const auto& p = result.params;
    const int d = p.two_j + 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jx(spin_jx(p.two_j));
    const Eigen::MatrixXd rotT = jx.eigenvectors().transpose();

    std::vector<DominanceWeights> out;
    out.reserve(result.dim());
    for (std::size_t k = 0; k < result.dim(); ++k) {
        // Column n of `spin` holds the spin factor attached to photon number n.
        const auto full = full_vector(result, k);
        const Eigen::Map<const Eigen::MatrixXd> spin(full.data(), d, p.n_max + 1);
        const double z_max = spin.cwiseAbs2().maxCoeff();
        const double x_max = (rotT * spin).cwiseAbs2().maxCoeff();
        out.push_back({z_max, x_max});
    }
    return out;
}

std::vector<Dominance> dominance_classify(const SpectrumResult& result, const ModelParams& params,
                                          double threshold) {
    if (result.params.two_j != params.two_j || result.params.n_max != params.n_max)
        throw BasisMismatch("spectrum was computed for a different basis");
    std::vector<Dominance> labels;
    for (const auto& w : dominance_weights(result))
        labels.push_back(w.x_max > w.z_max + threshold ? Dominance::XBasis : Dominance::ZBasis);
    return labels;
}

void attach_dominance(std::vector<PeresPoint>& points, const std::vector<Dominance>& labels) {
    for (auto& pt : points) {
        if (pt.k >= labels.size()) throw BasisMismatch("dominance labels do not cover the lattice");
        pt.dominance = labels[pt.k];
    }
}

} // namespace tpdicke
