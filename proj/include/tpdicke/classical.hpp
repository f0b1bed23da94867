// classical.hpp: mean-field classical limit in the normal phase
//
// Energy per j on the Glauber-Bloch coherent-state manifold:
//
//   h(q,p,Q,P) = ω/2 (q² + p²) + ω₀/2 (Q² + P²) − ω₀
//              + γ (q² − p²) Q √(1 − (Q² + P²)/4)
//
// (q,p) is the field pair, (Q,P) the atomic pair on the Bloch disk
// Q² + P² ≤ 4. Trajectories follow Hamilton's equations.

#pragma once

#include "tpdicke/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tpdicke {

struct ClassicalState {
    double q{0.0};
    double p{0.0};
    double Q{0.0};
    double P{0.0};

    double atomic_radius2() const noexcept { return Q * Q + P * P; }
    std::array<double, 4> as_array() const noexcept { return {q, p, Q, P}; }
    static ClassicalState from_array(const std::array<double, 4>& a) noexcept {
        return {a[0], a[1], a[2], a[3]};
    }
};

struct PhaseGradient {
    double dq{0.0};
    double dp{0.0};
    double dQ{0.0};
    double dP{0.0};
};

// Distance to the Bloch-disk edge below which the gradient is treated as
// singular and trajectories stop.
inline constexpr double kBoundaryGuard = 1e-9;

// Throws DomainViolation if Q² + P² > 4.
double h_classical(const ClassicalState& x, const ModelParams& params);

// Closed-form partials of h. Throws BoundarySingularity within kBoundaryGuard
// of the disk edge (or DomainViolation outside it).
PhaseGradient gradient(const ClassicalState& x, const ModelParams& params);

// (q̇, ṗ, Q̇, Ṗ) = (∂h/∂p, −∂h/∂q, ∂h/∂P, −∂h/∂Q)
PhaseGradient equations_of_motion(const ClassicalState& x, const ModelParams& params);

// Q √(1 − (Q² + P²)/4): conserved when ω₀ = 0.
double jx_classical(double Q, double P);

// Nonnegative root q of h(q, p, Q, P) = ε. Requires the normal phase; throws
// OutsideShell when the point is not on the shell.
double q_plus(double epsilon, double p, double Q, double P, const ModelParams& params);

struct ShellGrid {
    enum class Mode { Grid, Random };
    Mode mode{Mode::Random};
    // Grid: points per side of the square [−2, 2]²; Random: number of
    // accepted (on-shell) points requested.
    int count{25};
};

// Initial conditions (q₊(ε, 0, Q, P), 0, Q, P) with (Q, P) in the open disk.
// Throws EmptyShell if no candidate lies on the shell.
std::vector<ClassicalState> sample_shell(double epsilon, const ShellGrid& grid,
                                         const ModelParams& params, std::uint64_t seed);

struct IntegratorTolerance {
    double abs{1e-13};
    double rel{1e-13};
    // Largest allowed |h(t) − h(0)| relative to max(1, |h(0)|); 0 disables.
    double max_relative_drift{1e-8};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    double energy_drift{0.0}; // max |h(x(t)) − h(x(0))| over stored points
};

// Adaptive Dormand-Prince 5(4) integration with dense output. Negative
// t_max integrates backward. The final stored point is at exactly t_max.
Trajectory integrate(const ClassicalState& x0, double t_max, const IntegratorTolerance& tol,
                     const ModelParams& params);

struct SectionPoint {
    double t;
    double Q;
    double P;
};

inline constexpr std::size_t kMaxCrossings = 10000;
inline constexpr double kCrossingTolerance = 1e-10;

// Crossings of p = 0 with q > 0 (ṗ < 0 there), each refined by bisection on
// the dense output to |p| ≤ kCrossingTolerance. At most max_crossings.
std::vector<SectionPoint> poincare_section(const ClassicalState& x0, double t_max,
                                           const IntegratorTolerance& tol, const ModelParams& params,
                                           std::size_t max_crossings = kMaxCrossings);

struct SectionRun {
    std::vector<SectionPoint> points;
    double t_end{0.0};        // time of the last accepted step
    bool domain_exit{false};  // stopped at the Bloch-disk edge before t_max
    std::string exit_reason;
};

// As poincare_section, but a DomainExit ends the run and keeps the crossings
// found so far instead of propagating.
SectionRun poincare_section_run(const ClassicalState& x0, double t_max, const IntegratorTolerance& tol,
                                const ModelParams& params, std::size_t max_crossings = kMaxCrossings);

// Same surface, located from a stored trajectory by re-integrating each
// bracketing step.
std::vector<SectionPoint> poincare_section(const Trajectory& traj, const IntegratorTolerance& tol,
                                           const ModelParams& params,
                                           std::size_t max_crossings = kMaxCrossings);

struct BoundaryPoint {
    int theta_index;
    double Q;
    double P;
};

// Edge of the (Q, P) region where q₊(ε, 0, Q, P) exists, traced by bisection
// along n_theta rays.
std::vector<BoundaryPoint> available_boundary(double epsilon, const ModelParams& params,
                                              int n_theta = 360);

// The Bloch-disk edge Q² + P² = 4 on the same rays.
std::vector<BoundaryPoint> disk_boundary(int n_theta = 360);

// Fraction of cells of a cells×cells grid over the square enclosing the
// accessible disk of radius `radius` (cells whose centre lies inside it)
// that contain at least one section point.
double section_occupancy(const std::vector<SectionPoint>& points, double radius, int cells = 100);

// Radius of the accessible region at p = 0: min(2, √(2(ε + ω₀)/ω₀)).
double available_radius(double epsilon, const ModelParams& params);

} // namespace tpdicke
