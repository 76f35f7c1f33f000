#pragma once

// Residuals and solution certification for the generalised Riccati equation
// with a possibly singular input weight, backward and forward integration of
// the associated matrix differential flow, extraction of the minimal PSD
// solution as the forward-flow limit, and an independent Hamiltonian-based
// solver for the regular (invertible R) case used as an oracle.
//
// Equation conventions. With R^+ the pseudo-inverse of R, the algebraic
// residual of a symmetric X is
//     Ric(X) = X A + A^T X - (S + X B) R^+ (S^T + B^T X) + Q,
// and a certified solution additionally satisfies the kernel constraint
// (S + X B) G = 0, where G projects onto ker R. The backward flow solves
// dP/dt = -Ric(P) from a terminal penalty P(T) = H; the forward flow solves
// dX/dt = Ric(X) from X(0) = 0.

#include "cgcare/errors.hpp"
#include "cgcare/ode.hpp"
#include "cgcare/problem.hpp"

#include <vector>

namespace cgcare {

struct GridSpec {
    int samples = 201;  // output stamps, endpoints included
};

struct GrdeSettings {
    OdeSettings ode;
    RankTolerance rank_tol;
};

enum class FlowDirection { backward_from_terminal, forward_from_zero };

struct GRDETrajectory {
    FlowDirection direction = FlowDirection::forward_from_zero;
    std::vector<double> grid;    // strictly increasing stamps covering the interval
    std::vector<Matrix> values;  // one symmetric matrix per stamp
    // Per-stamp invariant diagnostics.
    std::vector<double> kernel_defects;  // ‖values[i] * B * G‖_F
    std::vector<double> step_min_eigs;   // min eig of values[i+1] - values[i]
    long accepted_steps = 0;
};

struct SolutionCandidate {
    Matrix X;
    double gcare_residual_norm = 0.0;
    double kernel_defect = 0.0;  // ‖(S + X B) G‖_F
    double xb2_defect = 0.0;     // ‖X B2‖_F
    bool is_solution = false;    // residual and kernel defect within tolerance
    // Diagnostics implied for true solutions: ker X ⊆ ker Lambda and both X
    // and Lambda annihilate the reachable subspace of (F, B2).
    bool ker_x_in_ker_lambda = false;
    double x_reach_defect = 0.0;
    double lambda_reach_defect = 0.0;
};

struct LimitResult {
    Matrix Xbar;
    bool converged = false;  // stationary flow found and certified
    double time = 0.0;       // integration time at which the flow went stationary
    long accepted_steps = 0;
    double residual_norm = 0.0;
    double growth_rate = 0.0;  // trailing d‖X‖/dt estimate
};

struct LimitSettings {
    // Tighter local error than the plain flows: the absolute residual gate
    // below must stay reachable for solutions of norm up to ~50.
    OdeSettings ode{.rel_tol = 1e-11, .abs_tol = 1e-13};
    RankTolerance rank_tol;
    double t_max = 200.0;
    double stat_tol = 1e-9;      // on ‖dX/dt‖, scaled by (1 + ‖X‖)
    double res_tol = 1e-8;       // absolute, on the algebraic residual norm
    int window = 10;             // consecutive accepted steps both must hold
    double solution_tol = 1e-7;  // certification tolerance for the limit
};

/// Ric(X) as defined above. Throws NotSymmetric.
Matrix gcare_residual(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol = {});

/// Equivalent cross-term-free residual X F + F^T X - X B R^+ B^T X + Lambda.
/// Agrees with gcare_residual for every symmetric X.
Matrix reduced_residual(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol = {});

/// Evaluates every defect of a candidate X and certifies it as a solution
/// when both the residual norm and the kernel defect are at most tol.
SolutionCandidate check_cgcare(const ProblemData& sigma, const Matrix& X, double tol = 1e-8,
                               RankTolerance rank_tol = {});

/// Change of terminal penalty that removes the coupling of H into the
/// reachable subspace of (F, B2) without changing the optimal cost.
struct TerminalReduction {
    Matrix H_reduced;  // H' with H' * reach(F, B2) = 0 and H' ⪯ H
    Matrix U;          // orthogonal [U1 | U2], im U1 = reach(F, B2)
    Matrix U21;        // -H11^+ H12 in the U coordinates
    Index reach_dim = 0;
};

TerminalReduction reduce_terminal_penalty(const ProblemData& sigma, const Matrix& H,
                                          RankTolerance rank_tol = {}, double psd_tol = 1e-9);

/// Integrates dP/dt = -Ric(P) backward from P(T) = H, returning values on an
/// increasing grid over [T - horizon, T] relabelled to [0, T]. H must be PSD
/// and must already annihilate reach(F, B2); otherwise
/// TerminalPenaltyNotReduced is thrown (reduce_terminal_penalty fixes it).
GRDETrajectory grde_backward(const ProblemData& sigma, const Matrix& H, double horizon,
                             const GridSpec& grid = {}, const GrdeSettings& settings = {});

/// Integrates dX/dt = Ric(X) from X(0) = 0 over [0, t_max]. Throws
/// IntegrationDiverged with a growth diagnostic when the flow blows up.
GRDETrajectory grde_forward(const ProblemData& sigma, double t_max, const GridSpec& grid = {},
                            const GrdeSettings& settings = {});

/// Runs the forward flow until it is stationary (residual below both
/// thresholds for a sustained window) and certifies the limit. Throws
/// NoConvergence when t_max is reached first and IntegrationDiverged when
/// the flow blows up; both carry a trailing growth-rate diagnostic.
LimitResult care_limit_solution(const ProblemData& sigma, const LimitSettings& settings = {});

enum class PsdOrdering { equal, less_equal, greater_equal, incomparable };

/// Sign-definiteness of X2 - X1 up to tol (relative to the matrices' scale).
/// less_equal means X1 ⪯ X2.
PsdOrdering compare_psd(const Matrix& X1, const Matrix& X2, double tol = 1e-9);

/// Stabilizing solution of the classic Riccati equation for R ≻ 0, computed
/// from the stable invariant subspace of the Hamiltonian matrix. Fully
/// independent of the differential-flow code path; intended as a test
/// oracle. Throws NotRegular when R is singular and NoStabilizingSolution
/// when the stable subspace does not yield a verified solution.
Matrix regular_care_oracle(const ProblemData& sigma, double axis_tol = 1e-8,
                           double residual_tol = 1e-6);

}  // namespace cgcare
