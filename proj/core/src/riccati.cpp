#include "cgcare/riccati.hpp"

#include "cgcare/errors.hpp"
#include "cgcare/geometry.hpp"
#include "cgcare/matlin.hpp"
#include "growth_tracker.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cgcare {

namespace {

void require_symmetric_candidate(const ProblemData& sigma, const Matrix& X) {
    if (X.rows() != sigma.n() || X.cols() != sigma.n()) {
        throw DimensionMismatch("X must match the state dimension");
    }
    if (!is_symmetric(X)) throw NotSymmetric("X must be symmetric");
}

/// Pieces of the residual map reused across a whole integration run.
struct RiccatiOperator {
    Matrix A, B, Q, S, R_pinv, BG;

    RiccatiOperator(const ProblemData& sigma, RankTolerance tol)
        : A(sigma.A),
          B(sigma.B),
          Q(sigma.Q),
          S(sigma.S),
          R_pinv(pseudo_inverse(sigma.R, tol)),
          BG(sigma.B * kernel_projector(sigma.R, tol)) {}

    Matrix residual(const Matrix& X) const {
        const Matrix SX = S + X * B;
        return X * A + A.transpose() * X - SX * R_pinv * SX.transpose() + Q;
    }

    double kernel_defect(const Matrix& X) const { return (X * BG).norm(); }
};

std::string format_growth(const detail::GrowthTracker& tracker) {
    std::ostringstream oss;
    oss << "trailing growth rate " << tracker.rate() << " per unit time ("
        << to_string(tracker.classify()) << ")";
    return oss.str();
}

void fill_diagnostics(GRDETrajectory& traj, const RiccatiOperator& op) {
    traj.kernel_defects.clear();
    traj.step_min_eigs.clear();
    traj.kernel_defects.reserve(traj.values.size());
    for (const Matrix& P : traj.values) {
        traj.kernel_defects.push_back(op.kernel_defect(P));
    }
    if (traj.values.size() > 1) {
        traj.step_min_eigs.reserve(traj.values.size() - 1);
        for (size_t i = 0; i + 1 < traj.values.size(); ++i) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(
                symmetrized(traj.values[i + 1] - traj.values[i]), Eigen::EigenvaluesOnly);
            traj.step_min_eigs.push_back(es.eigenvalues().minCoeff());
        }
    }
}

/// Integrates dY/dt = residual(Y) along an increasing grid, re-symmetrizing
/// after every accepted step, and converts stepper failures into
/// IntegrationDiverged carrying the growth diagnostic.
GRDETrajectory run_flow(const RiccatiOperator& op, const Matrix& Y0,
                        const std::vector<double>& grid, const OdeSettings& ode,
                        const char* label) {
    GRDETrajectory traj;
    traj.grid = grid;
    traj.values.reserve(grid.size());
    traj.values.push_back(Y0);

    detail::GrowthTracker tracker;
    tracker.record(grid.front(), Y0.norm());

    const MatrixRhs rhs = [&op](double, const Matrix& Y) { return op.residual(Y); };
    const StepTransform resym = [](Matrix& Y) { Y = symmetrized(Y); };

    double t = grid.front();
    Matrix Y = Y0;
    OdeSettings leg_settings = ode;
    const StepObserver observe = [&tracker](double tt, const Matrix& YY) {
        tracker.record(tt, YY.norm());
        return true;
    };
    for (size_t i = 1; i < grid.size(); ++i) {
        const OdeOutcome leg = advance_to(rhs, t, Y, grid[i], leg_settings, resym, observe);
        leg_settings.initial_step = leg.last_step;
        traj.accepted_steps += leg.accepted_steps;
        if (leg.status != OdeStatus::reached_target) {
            std::ostringstream oss;
            oss << label << ": "
                << (leg.status == OdeStatus::norm_ceiling ? "flow norm exceeded the ceiling"
                                                          : "step size underflow")
                << " at t = " << leg.time << "; " << format_growth(tracker);
            throw IntegrationDiverged(oss.str(), leg.time, tracker.rate(), tracker.classify());
        }
        traj.values.push_back(Y);
    }
    fill_diagnostics(traj, op);
    return traj;
}

}  // namespace

Matrix gcare_residual(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol) {
    check_dimensions(sigma);
    require_symmetric_candidate(sigma, X);
    const Matrix SX = sigma.S + X * sigma.B;
    return X * sigma.A + sigma.A.transpose() * X -
           SX * pseudo_inverse(sigma.R, rank_tol) * SX.transpose() + sigma.Q;
}

Matrix reduced_residual(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol) {
    check_dimensions(sigma);
    require_symmetric_candidate(sigma, X);
    const Matrix R_pinv = pseudo_inverse(sigma.R, rank_tol);
    const Matrix F = sigma.A - sigma.B * R_pinv * sigma.S.transpose();
    const Matrix Lambda = sigma.Q - sigma.S * R_pinv * sigma.S.transpose();
    return X * F + F.transpose() * X - X * sigma.B * R_pinv * sigma.B.transpose() * X + Lambda;
}

SolutionCandidate check_cgcare(const ProblemData& sigma, const Matrix& X, double tol,
                               RankTolerance rank_tol) {
    check_dimensions(sigma);
    require_symmetric_candidate(sigma, X);

    const Matrix R_pinv = pseudo_inverse(sigma.R, rank_tol);
    const Matrix G = kernel_projector(sigma.R, rank_tol);
    const Matrix B2 = sigma.B * kernel_basis(sigma.R, rank_tol).basis;
    const Matrix F = sigma.A - sigma.B * R_pinv * sigma.S.transpose();
    const Matrix Lambda = sigma.Q - sigma.S * R_pinv * sigma.S.transpose();

    SolutionCandidate cand;
    cand.X = X;
    cand.gcare_residual_norm = gcare_residual(sigma, X, rank_tol).norm();
    cand.kernel_defect = ((sigma.S + X * sigma.B) * G).norm();
    cand.xb2_defect = (X * B2).norm();
    cand.is_solution = cand.gcare_residual_norm <= tol && cand.kernel_defect <= tol &&
                       cand.xb2_defect <= tol;

    cand.ker_x_in_ker_lambda =
        subspace_contains(kernel_basis(Lambda, rank_tol), kernel_basis(X, rank_tol));
    const Subspace reach = reachable_subspace(F, B2, rank_tol);
    cand.x_reach_defect = reach.is_trivial() ? 0.0 : (X * reach.basis).norm();
    cand.lambda_reach_defect = reach.is_trivial() ? 0.0 : (Lambda * reach.basis).norm();
    return cand;
}

TerminalReduction reduce_terminal_penalty(const ProblemData& sigma, const Matrix& H,
                                          RankTolerance rank_tol, double psd_tol) {
    check_dimensions(sigma);
    if (H.rows() != sigma.n() || H.cols() != sigma.n()) {
        throw DimensionMismatch("H must match the state dimension");
    }
    if (!is_psd(H, psd_tol)) throw NotPSD("terminal penalty must be symmetric PSD");

    const Matrix R_pinv = pseudo_inverse(sigma.R, rank_tol);
    const Matrix F = sigma.A - sigma.B * R_pinv * sigma.S.transpose();
    const Matrix B2 = sigma.B * kernel_basis(sigma.R, rank_tol).basis;
    const Subspace reach = reachable_subspace(F, B2, rank_tol);

    const Index n = sigma.n();
    const Index r = reach.dim();
    TerminalReduction red;
    red.reach_dim = r;
    if (r == 0) {
        red.H_reduced = H;
        red.U = Matrix::Identity(n, n);
        red.U21 = Matrix::Zero(0, n);
        return red;
    }

    // Orthogonal split [U1 | U2] with im U1 = reach(F, B2).
    const Matrix U1 = reach.basis;
    const Matrix U2 = kernel_basis(U1.transpose(), rank_tol).basis;
    red.U.resize(n, n);
    red.U << U1, U2;

    const Matrix H11 = U1.transpose() * H * U1;
    const Matrix H12 = U1.transpose() * H * U2;
    const Matrix H22 = U2.transpose() * H * U2;
    red.U21 = -pseudo_inverse(H11, rank_tol) * H12;
    const Matrix H22_tilde = symmetrized(H12.transpose() * red.U21 + H22);
    red.H_reduced = symmetrized(U2 * H22_tilde * U2.transpose());
    return red;
}

GRDETrajectory grde_backward(const ProblemData& sigma, const Matrix& H, double horizon,
                             const GridSpec& grid, const GrdeSettings& settings) {
    check_dimensions(sigma);
    if (horizon <= 0.0) throw Error("horizon must be positive");
    if (!is_psd(H, 1e-9)) throw NotPSD("terminal penalty must be symmetric PSD");

    const RiccatiOperator op(sigma, settings.rank_tol);
    {
        const Matrix R_pinv = pseudo_inverse(sigma.R, settings.rank_tol);
        const Matrix F = sigma.A - sigma.B * R_pinv * sigma.S.transpose();
        const Matrix B2 = sigma.B * kernel_basis(sigma.R, settings.rank_tol).basis;
        const Subspace reach = reachable_subspace(F, B2, settings.rank_tol);
        const double coupling = reach.is_trivial() ? 0.0 : (H * reach.basis).norm();
        if (coupling > 1e-9 * std::max(1.0, H.norm())) {
            throw TerminalPenaltyNotReduced(
                "terminal penalty couples into the free state directions "
                "(apply reduce_terminal_penalty first)");
        }
    }

    // Reverse time: M(tau) = P(T - tau) obeys dM/dtau = +Ric(M), M(0) = H.
    GRDETrajectory traj;
    try {
        traj = run_flow(op, symmetrized(H), uniform_grid(0.0, horizon, grid.samples),
                        settings.ode, "backward flow");
    } catch (const IntegrationDiverged& e) {
        std::ostringstream oss;
        oss << "backward flow failed at t = " << horizon - e.time << " (from terminal time "
            << horizon << "); " << e.what();
        throw IntegrationDiverged(oss.str(), horizon - e.time, e.growth_rate, e.growth);
    }
    std::reverse(traj.values.begin(), traj.values.end());
    for (double& t : traj.grid) t = horizon - t;
    std::reverse(traj.grid.begin(), traj.grid.end());
    fill_diagnostics(traj, op);
    traj.direction = FlowDirection::backward_from_terminal;
    return traj;
}

GRDETrajectory grde_forward(const ProblemData& sigma, double t_max, const GridSpec& grid,
                            const GrdeSettings& settings) {
    check_dimensions(sigma);
    if (t_max <= 0.0) throw Error("t_max must be positive");
    const RiccatiOperator op(sigma, settings.rank_tol);
    GRDETrajectory traj =
        run_flow(op, Matrix::Zero(sigma.n(), sigma.n()), uniform_grid(0.0, t_max, grid.samples),
                 settings.ode, "forward flow");
    traj.direction = FlowDirection::forward_from_zero;
    return traj;
}

LimitResult care_limit_solution(const ProblemData& sigma, const LimitSettings& settings) {
    check_dimensions(sigma);
    const RiccatiOperator op(sigma, settings.rank_tol);
    const MatrixRhs rhs = [&op](double, const Matrix& Y) { return op.residual(Y); };
    const StepTransform resym = [](Matrix& Y) { Y = symmetrized(Y); };

    detail::GrowthTracker tracker;
    tracker.record(0.0, 0.0);

    int quiet_steps = 0;
    double last_residual = op.residual(Matrix::Zero(sigma.n(), sigma.n())).norm();
    const StepObserver observe = [&](double t, const Matrix& X) {
        tracker.record(t, X.norm());
        last_residual = op.residual(X).norm();
        const bool stationary = last_residual <= settings.stat_tol * (1.0 + X.norm()) &&
                                last_residual <= settings.res_tol;
        quiet_steps = stationary ? quiet_steps + 1 : 0;
        return quiet_steps < settings.window;
    };

    double t = 0.0;
    Matrix X = Matrix::Zero(sigma.n(), sigma.n());
    OdeSettings ode = settings.ode;
    const OdeOutcome outcome = advance_to(rhs, t, X, settings.t_max, ode, resym, observe);

    switch (outcome.status) {
        case OdeStatus::stopped_by_observer:
            break;  // stationary window reached
        case OdeStatus::reached_target: {
            // The flow may be exactly stationary from the start (e.g. the
            // zero solution); accept it when the residual already qualifies.
            if (!(last_residual <= settings.res_tol &&
                  last_residual <= settings.stat_tol * (1.0 + X.norm()))) {
                std::ostringstream oss;
                oss << "no stationary flow within t_max = " << settings.t_max
                    << " (residual " << last_residual << "); " << format_growth(tracker);
                throw NoConvergence(oss.str(), outcome.time, last_residual, tracker.rate(),
                                    tracker.classify());
            }
            break;
        }
        case OdeStatus::norm_ceiling:
        case OdeStatus::step_underflow: {
            std::ostringstream oss;
            oss << "forward flow "
                << (outcome.status == OdeStatus::norm_ceiling ? "exceeded the norm ceiling"
                                                              : "hit step underflow")
                << " at t = " << outcome.time << "; " << format_growth(tracker);
            throw IntegrationDiverged(oss.str(), outcome.time, tracker.rate(),
                                      tracker.classify());
        }
    }

    LimitResult result;
    result.Xbar = symmetrized(X);
    result.time = t;
    result.accepted_steps = outcome.accepted_steps;
    result.residual_norm = last_residual;
    result.growth_rate = tracker.rate();
    const SolutionCandidate cand =
        check_cgcare(sigma, result.Xbar, settings.solution_tol, settings.rank_tol);
    result.converged = cand.is_solution && is_psd(result.Xbar, settings.solution_tol);
    return result;
}

PsdOrdering compare_psd(const Matrix& X1, const Matrix& X2, double tol) {
    if (X1.rows() != X2.rows() || X1.cols() != X2.cols() || X1.rows() != X1.cols()) {
        throw DimensionMismatch("compare_psd expects square matrices of equal size");
    }
    if (!is_symmetric(X1) || !is_symmetric(X2)) {
        throw NotSymmetric("compare_psd expects symmetric matrices");
    }
    if (X1.size() == 0) return PsdOrdering::equal;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(X2 - X1), Eigen::EigenvaluesOnly);
    const double scale = std::max({1.0, X1.cwiseAbs().maxCoeff(), X2.cwiseAbs().maxCoeff()});
    const bool lower_ok = es.eigenvalues().minCoeff() >= -tol * scale;
    const bool upper_ok = es.eigenvalues().maxCoeff() <= tol * scale;
    if (lower_ok && upper_ok) return PsdOrdering::equal;
    if (lower_ok) return PsdOrdering::less_equal;
    if (upper_ok) return PsdOrdering::greater_equal;
    return PsdOrdering::incomparable;
}

Matrix regular_care_oracle(const ProblemData& sigma, double axis_tol, double residual_tol) {
    check_dimensions(sigma);
    const Index n = sigma.n();

    Eigen::SelfAdjointEigenSolver<Matrix> res(symmetrized(sigma.R), Eigen::EigenvaluesOnly);
    const double r_scale = std::max(1.0, res.eigenvalues().cwiseAbs().maxCoeff());
    if (res.eigenvalues().minCoeff() <= 1e-12 * r_scale) {
        throw NotRegular("input weight R is singular");
    }

    const Matrix R_inv = sigma.R.llt().solve(Matrix::Identity(sigma.m(), sigma.m()));
    const Matrix F0 = sigma.A - sigma.B * R_inv * sigma.S.transpose();
    const Matrix V = sigma.B * R_inv * sigma.B.transpose();
    const Matrix L0 = sigma.Q - sigma.S * R_inv * sigma.S.transpose();

    Matrix ham(2 * n, 2 * n);
    ham << F0, -V, -L0, -F0.transpose();

    Eigen::EigenSolver<Matrix> es(ham);
    if (es.info() != Eigen::Success) {
        throw NoStabilizingSolution("Hamiltonian eigendecomposition failed");
    }

    // Pick the n eigenvectors with the most negative real parts; all of them
    // must lie in the closed left half plane.
    std::vector<Index> order(static_cast<size_t>(2 * n));
    for (Index i = 0; i < 2 * n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&es](Index a, Index b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    const double axis_scale =
        std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (Index k = 0; k < n; ++k) {
        if (es.eigenvalues()(order[static_cast<size_t>(k)]).real() > axis_tol * axis_scale) {
            throw NoStabilizingSolution("fewer than n eigenvalues in the left half plane");
        }
    }

    Eigen::MatrixXcd basis(2 * n, n);
    for (Index k = 0; k < n; ++k) {
        basis.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
    }
    const Eigen::MatrixXcd V1 = basis.topRows(n);
    const Eigen::MatrixXcd V2 = basis.bottomRows(n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V1);
    if (!lu.isInvertible()) {
        throw NoStabilizingSolution("stable subspace is not a graph over the state space");
    }
    const Eigen::MatrixXcd Xc = V2 * lu.inverse();
    if (Xc.imag().norm() > 1e-6 * std::max(1.0, Xc.real().norm())) {
        throw NoStabilizingSolution("stable subspace produced a non-real solution");
    }

    const Matrix X = symmetrized(Xc.real());
    const double scale = (1.0 + X.norm()) * (1.0 + sigma.A.norm() + sigma.B.norm());
    if (gcare_residual(sigma, X).norm() > residual_tol * scale) {
        throw NoStabilizingSolution("candidate from the stable subspace fails verification");
    }
    return X;
}

}  // namespace cgcare
