// classical.cpp: Hamilton's equations, shell sampling, Poincaré sections

#include "tpdicke/classical.hpp"

#include "tpdicke/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tpdicke {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 4>;

constexpr double kRejectDerivative = 1e150;

void check_domain(const ClassicalState& x) {
    if (!std::isfinite(x.q) || !std::isfinite(x.p) || !std::isfinite(x.Q) || !std::isfinite(x.P))
        throw DomainViolation("classical state is not finite");
    if (x.atomic_radius2() > 4.0) {
        std::ostringstream os;
        os << "Q^2 + P^2 = " << x.atomic_radius2() << " lies outside the Bloch disk";
        throw DomainViolation(os.str());
    }
}

// √(1 − (Q² + P²)/4)
double bloch_factor(double Q, double P) { return std::sqrt(std::max(0.0, 1.0 - (Q * Q + P * P) / 4.0)); }

struct DensePropagator {
    using Stepper = odeint::dense_output_runge_kutta<
        odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>>>;

    const ModelParams& params;
    Stepper stepper;

    DensePropagator(const ModelParams& p, const IntegratorTolerance& tol)
        : params(p), stepper(odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>())) {}

    // Trial stages may land outside the disk or inside the guard band. A huge
    // derivative there makes the error estimate fail, so the step is rejected
    // and retried smaller instead of aborting the run.
    void rhs(const State& s, State& ds, double /*t*/) const {
        const double r2 = s[2] * s[2] + s[3] * s[3];
        if (!(r2 <= 4.0) || 2.0 - std::sqrt(r2) < kBoundaryGuard) {
            ds.fill(kRejectDerivative);
            return;
        }
        const auto d = equations_of_motion(ClassicalState::from_array(s), params);
        ds = {d.dq, d.dp, d.dQ, d.dP};
    }

    auto system() {
        return [this](const State& s, State& ds, double t) { rhs(s, ds, t); };
    }

    // Runs from x0 over [0, t_max], invoking on_step(t_old, t_new) after each
    // accepted step. on_step returns false to stop early.
    template <typename OnStep>
    void run(const ClassicalState& x0, double t_max, OnStep&& on_step) {
        check_domain(x0);
        if (t_max == 0.0) return;
        const double dir = t_max > 0.0 ? 1.0 : -1.0;
        stepper.initialize(x0.as_array(), 0.0, dir * 1e-3);
        auto sys = system();
        std::size_t steps = 0;
        try {
            while (dir * (stepper.current_time() - t_max) < 0.0) {
                const double t_old = stepper.current_time();
                stepper.do_step(sys);
                const double t_new = stepper.current_time();
                if (!(std::abs(t_new - t_old) > 0.0) || ++steps > 500'000'000) {
                    const auto& s = stepper.current_state();
                    if (2.0 - std::sqrt(s[2] * s[2] + s[3] * s[3]) < 1e-6)
                        throw DomainExit("trajectory stalled at the Bloch-disk edge at t=" + std::to_string(t_old));
                    throw StepFailure("integrator stalled at t=" + std::to_string(t_old));
                }
                const auto& s = stepper.current_state();
                if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); }))
                    throw StepFailure("non-finite state at t=" + std::to_string(t_new));
                if (2.0 - std::sqrt(s[2] * s[2] + s[3] * s[3]) < kBoundaryGuard)
                    throw DomainExit("trajectory reached the Bloch-disk edge at t=" + std::to_string(t_new));
                if (!on_step(t_old, std::min(dir * t_new, dir * t_max) * dir)) break;
            }
        } catch (const BoundarySingularity& e) {
            throw DomainExit(std::string("trajectory reached the Bloch-disk edge: ") + e.what());
        } catch (const DomainViolation& e) {
            throw DomainExit(std::string("trajectory left the Bloch disk: ") + e.what());
        }
    }

    ClassicalState at(double t) {
        State s;
        stepper.calc_state(t, s);
        return ClassicalState::from_array(s);
    }
};

// Locates p = 0 inside [t_lo, t_hi] by bisection on the dense output.
SectionPoint refine_crossing(DensePropagator& prop, double t_lo, double t_hi, double p_lo) {
    ClassicalState mid = prop.at(t_hi);
    double t_mid = t_hi;
    for (int it = 0; it < 200; ++it) {
        t_mid = 0.5 * (t_lo + t_hi);
        mid = prop.at(t_mid);
        if (std::abs(mid.p) <= kCrossingTolerance) break;
        if ((mid.p > 0.0) == (p_lo > 0.0)) {
            t_lo = t_mid;
            p_lo = mid.p;
        } else {
            t_hi = t_mid;
        }
        if (t_hi - t_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_mid))) break;
    }
    return {t_mid, mid.Q, mid.P};
}

bool sign_change(double a, double b) { return a != 0.0 && ((a > 0.0) != (b > 0.0)) && b != a; }

} // namespace

double h_classical(const ClassicalState& x, const ModelParams& params) {
    check_domain(x);
    const double r2 = x.atomic_radius2();
    return 0.5 * params.omega * (x.q * x.q + x.p * x.p) + 0.5 * params.omega0 * r2 - params.omega0 +
           params.gamma * (x.q * x.q - x.p * x.p) * x.Q * bloch_factor(x.Q, x.P);
}

PhaseGradient gradient(const ClassicalState& x, const ModelParams& params) {
    check_domain(x);
    if (2.0 - std::sqrt(x.atomic_radius2()) < kBoundaryGuard)
        throw BoundarySingularity("gradient is singular at the Bloch-disk edge");
    const double f = bloch_factor(x.Q, x.P);
    const double qf = x.Q * f;
    const double quad = x.q * x.q - x.p * x.p;
    const double g = params.gamma;
    PhaseGradient d;
    d.dq = params.omega * x.q + 2.0 * g * x.q * qf;
    d.dp = params.omega * x.p - 2.0 * g * x.p * qf;
    // ∂(Qf)/∂Q = f − Q²/(4f), ∂(Qf)/∂P = −QP/(4f)
    d.dQ = params.omega0 * x.Q + g * quad * (f - x.Q * x.Q / (4.0 * f));
    d.dP = params.omega0 * x.P - g * quad * x.Q * x.P / (4.0 * f);
    return d;
}

PhaseGradient equations_of_motion(const ClassicalState& x, const ModelParams& params) {
    const auto g = gradient(x, params);
    return {g.dp, -g.dq, g.dP, -g.dQ};
}

double jx_classical(double Q, double P) { return Q * bloch_factor(Q, P); }

double q_plus(double epsilon, double p, double Q, double P, const ModelParams& params) {
    params.require_normal_phase();
    const ClassicalState probe{0.0, p, Q, P};
    check_domain(probe);
    const double qf = Q * bloch_factor(Q, P);
    const double a = 0.5 * params.omega + params.gamma * qf; // > 0 when γ < ω/2
    const double rest = 0.5 * params.omega * p * p - params.gamma * p * p * qf +
                        0.5 * params.omega0 * (Q * Q + P * P) - params.omega0;
    const double q2 = (epsilon - rest) / a;
    if (!(a > 0.0) || !(q2 >= 0.0)) {
        std::ostringstream os;
        os << "no real q on the shell eps=" << epsilon << " at (p,Q,P)=(" << p << "," << Q << "," << P << ")";
        throw OutsideShell(os.str());
    }
    return std::sqrt(q2);
}

std::vector<ClassicalState> sample_shell(double epsilon, const ShellGrid& grid,
                                         const ModelParams& params, std::uint64_t seed) {
    params.require_normal_phase();
    if (grid.count < 1) throw InvalidParameters("shell sampling needs count >= 1");
    std::vector<ClassicalState> out;
    auto admit = [&](double Q, double P) {
        if (Q * Q + P * P >= 4.0) return;
        try {
            out.push_back({q_plus(epsilon, 0.0, Q, P, params), 0.0, Q, P});
        } catch (const OutsideShell&) {
        }
    };

    if (grid.mode == ShellGrid::Mode::Grid) {
        const int n = grid.count;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double Q = n == 1 ? 0.0 : -2.0 + 4.0 * a / (n - 1);
                const double P = n == 1 ? 0.0 : -2.0 + 4.0 * b / (n - 1);
                admit(Q, P);
            }
    } else {
        // Rejection sampling inside the accessible disk; draws are a pure
        // function of the seed.
        std::mt19937_64 rng(seed);
        const double radius = epsilon >= -params.omega0 ? available_radius(epsilon, params) : 0.0;
        if (radius > 0.0) {
            std::uniform_real_distribution<double> u(-radius, radius);
            const auto wanted = static_cast<std::size_t>(grid.count);
            for (std::size_t tries = 0; out.size() < wanted && tries < 1000 * wanted; ++tries) {
                const double Q = u(rng);
                const double P = u(rng);
                if (Q * Q + P * P < radius * radius) admit(Q, P);
            }
        }
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no initial condition lies on the shell eps=" << epsilon << " (minimum is " << -params.omega0 << ")";
        throw EmptyShell(os.str());
    }
    return out;
}

Trajectory integrate(const ClassicalState& x0, double t_max, const IntegratorTolerance& tol,
                     const ModelParams& params) {
    params.require_normal_phase();
    DensePropagator prop(params, tol);
    Trajectory traj;
    const double h0 = h_classical(x0, params);
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    prop.run(x0, t_max, [&](double, double t_new) {
        const auto x = t_new == prop.stepper.current_time()
                           ? ClassicalState::from_array(prop.stepper.current_state())
                           : prop.at(t_new);
        traj.times.push_back(t_new);
        traj.states.push_back(x);
        traj.energy_drift = std::max(traj.energy_drift, std::abs(h_classical(x, params) - h0));
        return true;
    });
    const double bound = tol.max_relative_drift * std::max(1.0, std::abs(h0));
    if (tol.max_relative_drift > 0.0 && traj.energy_drift > bound) {
        std::ostringstream os;
        os << "energy drift " << traj.energy_drift << " exceeds " << bound;
        throw StepFailure(os.str());
    }
    return traj;
}

SectionRun poincare_section_run(const ClassicalState& x0, double t_max, const IntegratorTolerance& tol,
                                const ModelParams& params, std::size_t max_crossings) {
    params.require_normal_phase();
    DensePropagator prop(params, tol);
    SectionRun run;
    const double h0 = h_classical(x0, params);
    double drift = 0.0;
    double p_prev = x0.p;
    try {
        prop.run(x0, t_max, [&](double t_old, double t_new) {
            const auto x = prop.at(t_new);
            drift = std::max(drift, std::abs(h_classical(x, params) - h0));
            if (sign_change(p_prev, x.p) && p_prev > 0.0) {
                // p goes from + to − only where ṗ = −q(ω + 2γQf) < 0, i.e. q > 0.
                auto pt = refine_crossing(prop, t_old, t_new, p_prev);
                if (prop.at(pt.t).q > 0.0) run.points.push_back(pt);
            }
            p_prev = x.p;
            run.t_end = t_new;
            return run.points.size() < max_crossings;
        });
    } catch (const DomainExit& e) {
        run.domain_exit = true;
        run.exit_reason = std::string(e.what()).substr(e.kind().size() + 2);
    }
    const double bound = tol.max_relative_drift * std::max(1.0, std::abs(h0));
    if (tol.max_relative_drift > 0.0 && drift > bound) {
        std::ostringstream os;
        os << "energy drift " << drift << " exceeds " << bound;
        throw StepFailure(os.str());
    }
    return run;
}

std::vector<SectionPoint> poincare_section(const ClassicalState& x0, double t_max,
                                           const IntegratorTolerance& tol, const ModelParams& params,
                                           std::size_t max_crossings) {
    auto run = poincare_section_run(x0, t_max, tol, params, max_crossings);
    if (run.domain_exit) throw DomainExit(run.exit_reason);
    return std::move(run.points);
}

std::vector<SectionPoint> poincare_section(const Trajectory& traj, const IntegratorTolerance& tol,
                                           const ModelParams& params, std::size_t max_crossings) {
    params.require_normal_phase();
    std::vector<SectionPoint> out;
    IntegratorTolerance local = tol;
    local.max_relative_drift = 0.0;
    for (std::size_t i = 1; i < traj.states.size() && out.size() < max_crossings; ++i) {
        const auto& a = traj.states[i - 1];
        const auto& b = traj.states[i];
        if (!(sign_change(a.p, b.p) && a.p > 0.0)) continue;
        DensePropagator prop(params, local);
        const double t0 = traj.times[i - 1];
        const double span = traj.times[i] - t0;
        SectionPoint found{};
        bool have = false;
        double p_prev = a.p;
        prop.run(a, span, [&](double t_old, double t_new) {
            const auto x = prop.at(t_new);
            if (!have && sign_change(p_prev, x.p) && p_prev > 0.0) {
                found = refine_crossing(prop, t_old, t_new, p_prev);
                have = prop.at(found.t).q > 0.0;
            }
            p_prev = x.p;
            return !have;
        });
        if (have) out.push_back({t0 + found.t, found.Q, found.P});
    }
    return out;
}

double available_radius(double epsilon, const ModelParams& params) {
    if (epsilon < -params.omega0) return 0.0;
    if (params.omega0 <= 0.0) return 2.0;
    return std::min(2.0, std::sqrt(2.0 * (epsilon + params.omega0) / params.omega0));
}

std::vector<BoundaryPoint> available_boundary(double epsilon, const ModelParams& params, int n_theta) {
    params.require_normal_phase();
    if (n_theta < 3) throw InvalidParameters("boundary tracing needs at least 3 rays");
    auto on_shell = [&](double Q, double P) {
        try {
            q_plus(epsilon, 0.0, Q, P, params);
            return true;
        } catch (const OutsideShell&) {
            return false;
        }
    };
    if (!on_shell(0.0, 0.0))
        throw EmptyShell("the shell eps=" + std::to_string(epsilon) + " is empty");

    std::vector<BoundaryPoint> out;
    const double edge = 2.0 - kBoundaryGuard;
    for (int i = 0; i < n_theta; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n_theta;
        const double c = std::cos(th), s = std::sin(th);
        double lo = 0.0, hi = edge;
        if (on_shell(hi * c, hi * s)) {
            lo = hi;
        } else {
            for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                (on_shell(mid * c, mid * s) ? lo : hi) = mid;
            }
        }
        out.push_back({i, lo * c, lo * s});
    }
    return out;
}

std::vector<BoundaryPoint> disk_boundary(int n_theta) {
    if (n_theta < 3) throw InvalidParameters("boundary tracing needs at least 3 rays");
    std::vector<BoundaryPoint> out;
    for (int i = 0; i < n_theta; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n_theta;
        out.push_back({i, 2.0 * std::cos(th), 2.0 * std::sin(th)});
    }
    return out;
}

double section_occupancy(const std::vector<SectionPoint>& points, double radius, int cells) {
    if (cells < 1 || !(radius > 0.0)) throw InvalidParameters("occupancy grid needs cells >= 1 and radius > 0");
    const double width = 2.0 * radius / cells;
    std::vector<char> hit(static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells), 0);
    auto cell_of = [&](double v) { return std::clamp(static_cast<int>((v + radius) / width), 0, cells - 1); };
    for (const auto& pt : points) hit[static_cast<std::size_t>(cell_of(pt.Q)) * cells + cell_of(pt.P)] = 1;

    std::size_t inside = 0, occupied = 0;
    for (int a = 0; a < cells; ++a)
        for (int b = 0; b < cells; ++b) {
            const double Q = -radius + (a + 0.5) * width;
            const double P = -radius + (b + 0.5) * width;
            if (Q * Q + P * P > radius * radius) continue;
            ++inside;
            occupied += hit[static_cast<std::size_t>(a) * cells + b];
        }
    return inside == 0 ? 0.0 : static_cast<double>(occupied) / static_cast<double>(inside);
}

} // namespace tpdicke
