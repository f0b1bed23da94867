// model.cpp: basis enumeration and matrix assembly

#include "tpdicke/model.hpp"

#include "tpdicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tpdicke {

namespace {

bool finite(double x) { return std::isfinite(x); }

// √((n+1)(n+2)) = ⟨n+2|a†²|n⟩
double pair_amplitude(int n) {
    return std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
}

// C±(m) = √(j(j+1) − m(m±1)) written in doubled spins:
// ½ √(2j(2j+2) − 2m(2m±2)).
double ladder_amplitude(int two_j, int two_mz, int sign) {
    const long long v = static_cast<long long>(two_j) * (two_j + 2) -
                        static_cast<long long>(two_mz) * (two_mz + 2 * sign);
    return v <= 0 ? 0.0 : 0.5 * std::sqrt(static_cast<double>(v));
}

// Maps full-basis index to position within the target basis (or -1).
std::vector<long> index_map(const ModelParams& params, std::optional<ParitySector> tag) {
    std::vector<long> map(basis_size(params), -1);
    long k = 0;
    for (const auto& s : build_basis(params)) {
        if (!tag || parity_class(s, params) == *tag) map[full_index(s, params)] = k++;
    }
    return map;
}

} // namespace

void ModelParams::validate() const {
    std::ostringstream why;
    if (!finite(omega) || !(omega > 0.0)) why << "omega must be > 0 (got " << omega << "); ";
    if (!finite(omega0)) why << "omega0 must be finite; ";
    if (!finite(gamma) || gamma < 0.0) why << "gamma must be >= 0 (got " << gamma << "); ";
    if (two_j < 1) why << "j must be >= 1/2 (got two_j=" << two_j << "); ";
    if (n_max < 2) why << "n_max must be >= 2 (got " << n_max << "); ";
    const auto msg = why.str();
    if (!msg.empty()) throw InvalidParameters(msg.substr(0, msg.size() - 2));
}

void ModelParams::require_normal_phase() const {
    validate();
    if (!(gamma < 0.5 * omega)) {
        std::ostringstream os;
        os << "gamma=" << gamma << " reaches the collapse threshold omega/2=" << 0.5 * omega;
        throw SpectralCollapse(os.str());
    }
}

std::string to_string(ParitySector s) {
    switch (s) {
    case ParitySector::Plus1: return "+1";
    case ParitySector::PlusI: return "+i";
    case ParitySector::Minus1: return "-1";
    case ParitySector::MinusI: return "-i";
    }
    return "?";
}

std::optional<ParitySector> parse_sector(std::string_view text) {
    if (text.starts_with("p=")) text.remove_prefix(2);
    if (text == "+1" || text == "1") return ParitySector::Plus1;
    if (text == "-1") return ParitySector::Minus1;
    if (text == "+i" || text == "i") return ParitySector::PlusI;
    if (text == "-i") return ParitySector::MinusI;
    return std::nullopt;
}

std::string basis_label(std::optional<ParitySector> tag) {
    return tag ? to_string(*tag) : std::string("full");
}

std::string to_string(Observable op) {
    switch (op) {
    case Observable::NumberOp: return "number";
    case Observable::Jz: return "jz";
    case Observable::Jx: return "jx";
    case Observable::Jx2: return "jx2";
    case Observable::JSquared: return "jsquared";
    }
    return "?";
}

SymmetricOperator::SymmetricOperator(std::size_t dim, std::optional<ParitySector> basis_tag,
                                     std::vector<Entry> entries)
    : dim_(dim), tag_(basis_tag) {
    for (auto& e : entries) {
        if (e.row >= dim || e.col >= dim)
            throw InvalidParameters("operator entry outside matrix dimension");
        if (!std::isfinite(e.value)) throw InvalidParameters("operator entry is not finite");
        if (e.row > e.col) std::swap(e.row, e.col);
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& e : entries) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col)
            entries_.back().value += e.value;
        else
            entries_.push_back(e);
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
}

double SymmetricOperator::at(std::size_t row, std::size_t col) const {
    if (row > col) std::swap(row, col);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{row, col, 0.0},
                               [](const Entry& a, const Entry& b) {
                                   return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    return (it != entries_.end() && it->row == row && it->col == col) ? it->value : 0.0;
}

Eigen::MatrixXd SymmetricOperator::dense() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : entries_) {
        m(e.row, e.col) = e.value;
        m(e.col, e.row) = e.value;
    }
    return m;
}

void SymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim_ || y.size() != dim_)
        throw InvalidParameters("vector length does not match operator dimension");
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& e : entries_) {
        y[e.row] += e.value * x[e.col];
        if (e.row != e.col) y[e.col] += e.value * x[e.row];
    }
}

double SymmetricOperator::expectation(std::span<const double> x) const {
    if (x.size() != dim_) throw InvalidParameters("vector length does not match operator dimension");
    double acc = 0.0;
    for (const auto& e : entries_) {
        const double t = e.value * x[e.row] * x[e.col];
        acc += e.row == e.col ? t : 2.0 * t;
    }
    return acc;
}

double SymmetricOperator::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
    return m;
}

SymmetricOperator SymmetricOperator::plus_scaled(const SymmetricOperator& other,
                                                 double scale) const {
    if (other.dim_ != dim_ || other.tag_ != tag_)
        throw SectorMismatch("cannot add operators on different bases");
    std::vector<Entry> all = entries_;
    all.reserve(entries_.size() + other.entries_.size());
    for (auto e : other.entries_) {
        e.value *= scale;
        all.push_back(e);
    }
    return SymmetricOperator(dim_, tag_, std::move(all));
}

std::size_t basis_size(const ModelParams& params) {
    return static_cast<std::size_t>(params.n_max + 1) * static_cast<std::size_t>(params.two_j + 1);
}

std::size_t full_index(const BasisState& state, const ModelParams& params) {
    return static_cast<std::size_t>(state.n) * static_cast<std::size_t>(params.two_j + 1) +
           static_cast<std::size_t>((state.two_mz + params.two_j) / 2);
}

std::vector<BasisState> build_basis(const ModelParams& params) {
    params.validate();
    std::vector<BasisState> states;
    states.reserve(basis_size(params));
    for (int n = 0; n <= params.n_max; ++n)
        for (int two_mz = -params.two_j; two_mz <= params.two_j; two_mz += 2)
            states.push_back({n, two_mz});
    return states;
}

std::vector<BasisState> sector_basis(const ModelParams& params, ParitySector sector) {
    auto states = build_basis(params);
    std::erase_if(states, [&](const BasisState& s) { return parity_class(s, params) != sector; });
    return states;
}

std::vector<BasisState> basis_for(const ModelParams& params, std::optional<ParitySector> tag) {
    return tag ? sector_basis(params, *tag) : build_basis(params);
}

ParitySector parity_class(const BasisState& state, const ModelParams& params) {
    // two_mz + two_j = 2(m_z + j) is even and nonnegative.
    return static_cast<ParitySector>((state.n + state.two_mz + params.two_j) % 4);
}

SymmetricOperator hamiltonian(const ModelParams& params, std::optional<ParitySector> sector) {
    params.validate();
    const auto states = basis_for(params, sector);
    const auto map = index_map(params, sector);
    const double g = params.gamma / params.atoms();

    std::vector<SymmetricOperator::Entry> entries;
    entries.reserve(states.size() * 3);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        entries.push_back({k, k, params.omega * s.n + params.omega0 * s.mz()});
        if (g == 0.0 || s.n + 2 > params.n_max) continue;
        for (int sign : {+1, -1}) {
            const BasisState t{s.n + 2, s.two_mz + 2 * sign};
            if (std::abs(t.two_mz) > params.two_j) continue;
            const long col = map[full_index(t, params)];
            entries.push_back({k, static_cast<std::size_t>(col),
                               g * pair_amplitude(s.n) * ladder_amplitude(params.two_j, s.two_mz, sign)});
        }
    }
    return SymmetricOperator(states.size(), sector, std::move(entries));
}

Eigen::MatrixXd spin_jx(int two_j) {
    const int d = two_j + 1;
    Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
        const int two_mz = -two_j + 2 * i;
        const double c = 0.5 * ladder_amplitude(two_j, two_mz, +1);
        jx(i + 1, i) = c;
        jx(i, i + 1) = c;
    }
    return jx;
}

SymmetricOperator observable(const ModelParams& params, Observable which,
                             std::optional<ParitySector> sector) {
    params.validate();
    if (which == Observable::Jx && sector)
        throw SectorMismatch("Jx couples parity sectors; request it in the full basis");

    const auto states = basis_for(params, sector);
    const auto map = index_map(params, sector);
    const double jj1 = params.j() * (params.j() + 1.0);
    const int d = params.two_j + 1;

    Eigen::MatrixXd spin;
    if (which == Observable::Jx) spin = spin_jx(params.two_j);
    if (which == Observable::Jx2) {
        const auto jx = spin_jx(params.two_j);
        spin = jx * jx;
    }

    std::vector<SymmetricOperator::Entry> entries;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        switch (which) {
        case Observable::NumberOp: entries.push_back({k, k, static_cast<double>(s.n)}); break;
        case Observable::Jz: entries.push_back({k, k, s.mz()}); break;
        case Observable::JSquared: entries.push_back({k, k, jj1}); break;
        case Observable::Jx:
        case Observable::Jx2: {
            const int row = (s.two_mz + params.two_j) / 2;
            for (int col = row; col < d; ++col) {
                const double v = spin(row, col);
                if (v == 0.0) continue;
                const BasisState t{s.n, -params.two_j + 2 * col};
                entries.push_back({k, static_cast<std::size_t>(map[full_index(t, params)]), v});
            }
            break;
        }
        }
    }
    return SymmetricOperator(states.size(), sector, std::move(entries));
}

SymmetricOperator perturbed_hamiltonian(const ModelParams& params, double epsilon) {
    if (!std::isfinite(epsilon)) throw InvalidParameters("perturbation strength must be finite");
    return hamiltonian(params).plus_scaled(observable(params, Observable::Jx), epsilon);
}

SymmetricOperator photon_pair(const ModelParams& params, std::optional<ParitySector> sector) {
    params.validate();
    // Δn = ±2 shifts the parity residue by 2, so the operator links p to −p.
    if (sector) throw SectorMismatch("a^2 + a^dag^2 maps sector " + to_string(*sector) + " onto its negative");
    const auto states = basis_for(params, sector);
    const auto map = index_map(params, sector);
    std::vector<SymmetricOperator::Entry> entries;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        if (s.n + 2 > params.n_max) continue;
        const BasisState t{s.n + 2, s.two_mz};
        entries.push_back({k, static_cast<std::size_t>(map[full_index(t, params)]),
                           pair_amplitude(s.n)});
    }
    return SymmetricOperator(states.size(), sector, std::move(entries));
}

} // namespace tpdicke
