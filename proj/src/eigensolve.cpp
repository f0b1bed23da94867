// eigensolve.cpp: dense symmetric eigensolver wrapper and convergence filter

#include "tpdicke/eigensolve.hpp"

#include "tpdicke/errors.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace tpdicke {

namespace {

// Largest-magnitude coefficient of every column made positive.
void fix_phases(Eigen::MatrixXd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        if (v(imax, c) < 0.0) v.col(c) *= -1.0;
    }
}

// Some OpenBLAS builds mis-detect the CPU and select faulty level-3 kernels,
// which corrupts eigenvectors while leaving eigenvalues intact. Probe once
// with a small dense matrix and fall back to Eigen's solver if LAPACK fails.
bool lapack_trustworthy() {
    static const bool ok = [] {
        const int n = 160;
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k <= i; ++k) a(i, k) = a(k, i) = std::sin(0.37 * i * k + 0.11 * (i + k));
        const Eigen::MatrixXd ref = a;
        Eigen::VectorXd w(n);
        Eigen::MatrixXd z(n, n);
        Eigen::VectorXi support(2 * n);
        lapack_int found = 0;
        const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0,
                                               0.0, &found, w.data(), z.data(), n, support.data());
        const bool good = info == 0 && found == n && (ref * z - z * w.asDiagonal()).norm() < 1e-10 * n;
        if (!good)
            std::fprintf(stderr, "tpdicke: LAPACK eigensolver failed its self-test; using the slower Eigen "
                                 "solver (for OpenBLAS try OPENBLAS_CORETYPE=Haswell)\n");
        return good;
    }();
    return ok;
}

void lapack_solve(Eigen::MatrixXd& a, Eigen::VectorXd& w, bool with_vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd z(with_vectors ? n : 1, with_vectors ? n : 1);
    Eigen::VectorXi support(2 * std::max<lapack_int>(n, 1));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'A', 'U', n, a.data(), n,
                                           0.0, 0.0, 0, 0, 0.0, &found, w.data(), z.data(), with_vectors ? n : 1,
                                           support.data());
    if (info != 0 || found != n)
        throw NumericalFailure("dsyevr returned info=" + std::to_string(info) + " for dim " + std::to_string(n));
    if (with_vectors) a = std::move(z);
}

void eigen_solve(Eigen::MatrixXd& a, Eigen::VectorXd& w, bool with_vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, with_vectors ? Eigen::ComputeEigenvectors
                                                                       : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("Eigen eigensolver did not converge for dim " + std::to_string(a.rows()));
    w = es.eigenvalues();
    if (with_vectors) a = es.eigenvectors();
}

// ‖Hv − Ev‖ ≤ 1e−8·‖H‖₂ for every pair, with ‖H‖₂ = max |E|. Returns the
// first offending pair as a message, empty when all pass.
std::string verify_pairs(const SymmetricOperator& h, const std::vector<double>& energies, const Eigen::MatrixXd& v) {
    double norm = 0.0;
    for (double e : energies) norm = std::max(norm, std::abs(e));
    const double bound = 1e-8 * std::max(norm, std::numeric_limits<double>::min());
    const auto n = static_cast<std::size_t>(v.rows());
    std::vector<double> hv(n);
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        const auto col = v.col(k);
        h.apply(std::span<const double>(col.data(), n), hv);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = hv[i] - energies[static_cast<std::size_t>(k)] * col(static_cast<Eigen::Index>(i));
            r2 += d * d;
        }
        if (!(std::sqrt(r2) <= bound))
            return "eigenpair " + std::to_string(k) + " has residual " + std::to_string(std::sqrt(r2)) + " above " +
                   std::to_string(bound);
    }
    return {};
}

} // namespace

std::vector<double> SpectrumResult::converged_energies() const {
    return {energies.begin(), energies.begin() + static_cast<long>(converged_count)};
}

SpectrumResult diagonalize(const SymmetricOperator& matrix, const ModelParams& params,
                           bool with_vectors) {
    SpectrumResult out;
    out.sector = matrix.basis_tag();
    out.basis = basis_for(params, out.sector);
    out.params = params;
    if (out.basis.size() != matrix.dim())
        throw BasisMismatch("operator dimension " + std::to_string(matrix.dim()) +
                            " does not match basis size " + std::to_string(out.basis.size()));

    Eigen::MatrixXd a = matrix.dense();
    const auto n = static_cast<Eigen::Index>(matrix.dim());
    Eigen::VectorXd w(n);
    const bool lapack = n > 0 && lapack_trustworthy();
    if (lapack)
        lapack_solve(a, w, with_vectors);
    else if (n > 0)
        eigen_solve(a, w, with_vectors);

    out.energies.assign(w.data(), w.data() + n);
    for (double e : out.energies)
        if (!std::isfinite(e)) throw NumericalFailure("eigensolver produced a non-finite eigenvalue");
    if (with_vectors) {
        auto failure = verify_pairs(matrix, out.energies, a);
        if (!failure.empty() && lapack) {
            // the self-test is small; larger blocked kernels can still misbehave
            a = matrix.dense();
            eigen_solve(a, w, true);
            out.energies.assign(w.data(), w.data() + n);
            failure = verify_pairs(matrix, out.energies, a);
        }
        if (!failure.empty()) throw NumericalFailure(failure);
        fix_phases(a);
        out.vectors = std::move(a);
    }
    out.converged_count = out.energies.size();
    return out;
}

PhotonDistribution photon_distribution(const SpectrumResult& result, std::size_t k) {
    if (!result.has_vectors()) throw MissingVectors("photon distribution needs eigenvectors");
    if (k >= result.dim()) throw InvalidParameters("eigenstate index out of range");
    PhotonDistribution p;
    p.probs.assign(static_cast<std::size_t>(result.params.n_max + 1), 0.0);
    const auto& v = *result.vectors;
    for (std::size_t i = 0; i < result.basis.size(); ++i) {
        const double c = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        p.probs[static_cast<std::size_t>(result.basis[i].n)] += c * c;
    }
    return p;
}

std::size_t converged_count(const SpectrumResult& result, double delta) {
    if (!result.has_vectors()) throw MissingVectors("convergence test needs eigenvectors");
    if (!(delta > 0.0)) throw InvalidParameters("convergence tolerance must be > 0");
    const int top = result.params.n_max;
    const auto& v = *result.vectors;
    for (std::size_t k = 0; k < result.dim(); ++k) {
        double tail = 0.0;
        for (std::size_t i = 0; i < result.basis.size(); ++i) {
            if (result.basis[i].n < top - 1) continue;
            const double c = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            tail += c * c;
        }
        if (tail > delta) return k;
    }
    return result.dim();
}

SpectrumResult solve(const ModelParams& params, std::optional<ParitySector> sector, double delta) {
    auto result = diagonalize(hamiltonian(params, sector), params, true);
    result.converged_count = converged_count(result, delta);
    return result;
}

} // namespace tpdicke
