#pragma once

// Finite- and infinite-horizon linear-quadratic synthesis on top of the
// Riccati flows: feedback-law construction, the family of optimal controls
// parameterised by a free signal in the kernel directions of R, closed-loop
// simulation, and quadrature of the running cost.

#include "cgcare/problem.hpp"
#include "cgcare/riccati.hpp"

#include <optional>
#include <vector>

namespace cgcare {

struct FiniteHorizonProblem {
    ProblemData sigma;
    Matrix H;        // symmetric PSD terminal penalty
    double horizon;  // T > 0
    Vector x0;
};

/// A sampled m-vector signal with interpolation between stamps.
struct Signal {
    std::vector<double> grid;
    std::vector<Vector> samples;

    Vector at(double t) const;
};

/// u(t) = -K(t) x(t) + G v(t). Time-varying gains are stored at grid stamps
/// and interpolated cubically in between; v contributes only in the kernel
/// directions of R selected by the projector G.
struct ControlLaw {
    enum class Kind { time_varying, constant };

    Kind kind = Kind::constant;
    std::vector<double> grid;   // stamps for time-varying gains
    std::vector<Matrix> gains;  // K(t_i), m x n, one per stamp
    Matrix constant_gain;       // used when kind == constant
    Matrix projector;           // G, m x m
    std::optional<Signal> free_signal;

    Matrix gain_at(double t) const;
    Vector free_at(double t) const;  // zero when no free signal is attached
};

struct Trajectory {
    std::vector<double> grid;
    std::vector<Vector> states;
    std::vector<Vector> inputs;
    std::vector<double> integrand;  // [x; u]^T Pi [x; u] at each stamp
};

struct LQSolution {
    double optimal_value = 0.0;
    Matrix value_matrix;  // P(0) for finite horizons, the limit solution otherwise
    ControlLaw law;
    Trajectory trajectory;
    bool terminal_penalty_reduced = false;
    std::optional<TerminalReduction> reduction;
};

struct SolveSettings {
    GrdeSettings grde;
    LimitSettings limit;
    GridSpec grid;
    double sim_horizon = 20.0;  // simulation span for constant laws
    bool auto_reduce_terminal_penalty = true;
    double reduction_tol = 1e-9;  // on ‖H * basis(reach(F, B2))‖
};

/// Terminal-penalty reduction (when needed), backward flow, time-varying
/// gain schedule, optimal value x0^T P(0) x0, and a closed-loop simulation
/// with zero free signal. Throws TerminalPenaltyNotReduced when H couples
/// into the free directions and automatic reduction is disabled.
LQSolution solve_finite(const FiniteHorizonProblem& p, const SolveSettings& settings = {});

/// Infinite-horizon synthesis from the forward-flow limit: constant gain,
/// optimal value x0^T Xbar x0, and a simulation over sim_horizon.
/// Propagates NoConvergence from the limit computation.
LQSolution solve_infinite(const ProblemData& sigma, const Vector& x0,
                          const SolveSettings& settings = {});

/// Attaches a free signal to a law; the feedback part is unchanged.
ControlLaw control_family(const ControlLaw& law, const Signal& v);

/// Integrates dx/dt = A x + B u under the given law and records state,
/// input, and running-cost integrand samples on the grid.
Trajectory simulate_closed_loop(const ProblemData& sigma, const ControlLaw& law,
                                const Vector& x0, double horizon, const GridSpec& grid = {},
                                const OdeSettings& ode = {});

struct CostEstimate {
    double value = 0.0;
    double quadrature_error = 0.0;  // conservative estimate
};

/// Composite quadrature of the recorded integrand over the trajectory grid,
/// plus x(T)^T H x(T) when a terminal penalty is supplied.
CostEstimate evaluate_cost(const Trajectory& traj, const ProblemData& sigma,
                           const std::optional<Matrix>& H = std::nullopt);

/// One-sided finiteness check of the infinite-horizon cost: passes when
/// (A, B) is stabilizable (rank test over the unstable eigenvalues), and
/// reports unknown otherwise. Never claims failure.
enum class FinitenessProbe { sufficient_pass, unknown };

FinitenessProbe finiteness_probe(const ProblemData& sigma, double tol = 1e-8);

}  // namespace cgcare
