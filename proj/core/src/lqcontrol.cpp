#include "cgcare/lqcontrol.hpp"

#include "cgcare/errors.hpp"
#include "cgcare/geometry.hpp"
#include "cgcare/matlin.hpp"
#include "growth_tracker.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cgcare {

namespace {

size_t locate_interval(const std::vector<double>& grid, double t) {
    // Index i with grid[i] <= t < grid[i+1], clamped to the ends.
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const auto idx = static_cast<size_t>(std::distance(grid.begin(), it));
    if (idx == 0) return 0;
    return std::min(idx - 1, grid.size() - 2);
}

/// Cubic Hermite interpolation with finite-difference slopes; clamps
/// outside the grid.
template <class ValueType>
ValueType interp_cubic(const std::vector<double>& grid, const std::vector<ValueType>& values,
                       double t) {
    if (values.size() == 1 || t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    if (values.size() == 2) {
        const double w = (t - grid.front()) / (grid.back() - grid.front());
        return (1.0 - w) * values.front() + w * values.back();
    }
    const size_t i = locate_interval(grid, t);
    const double h = grid[i + 1] - grid[i];
    const double w = (t - grid[i]) / h;

    const auto slope_at = [&](size_t k) -> ValueType {
        if (k == 0) return (values[1] - values[0]) / (grid[1] - grid[0]);
        if (k + 1 == values.size())
            return (values[k] - values[k - 1]) / (grid[k] - grid[k - 1]);
        return (values[k + 1] - values[k - 1]) / (grid[k + 1] - grid[k - 1]);
    };
    const ValueType m0 = slope_at(i);
    const ValueType m1 = slope_at(i + 1);

    const double w2 = w * w, w3 = w2 * w;
    const double h00 = 2 * w3 - 3 * w2 + 1;
    const double h10 = w3 - 2 * w2 + w;
    const double h01 = -2 * w3 + 3 * w2;
    const double h11 = w3 - w2;
    return h00 * values[i] + (h10 * h) * m0 + h01 * values[i + 1] + (h11 * h) * m1;
}

/// Integral over [a, b] of the quadratic through (t0,f0), (t1,f1), (t2,f2).
double integrate_quadratic(double t0, double f0, double t1, double f1, double t2, double f2,
                           double a, double b) {
    const auto basis_integral = [a, b](double alpha, double beta) {
        // ∫ (t - alpha)(t - beta) dt over [a, b]
        const auto antiderivative = [alpha, beta](double t) {
            return t * t * t / 3.0 - (alpha + beta) * t * t / 2.0 + alpha * beta * t;
        };
        return antiderivative(b) - antiderivative(a);
    };
    const double l0 = basis_integral(t1, t2) / ((t0 - t1) * (t0 - t2));
    const double l1 = basis_integral(t0, t2) / ((t1 - t0) * (t1 - t2));
    const double l2 = basis_integral(t0, t1) / ((t2 - t0) * (t2 - t1));
    return f0 * l0 + f1 * l1 + f2 * l2;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
    double sum = 0.0;
    for (size_t i = 0; i + 1 < t.size(); ++i) {
        sum += 0.5 * (t[i + 1] - t[i]) * (f[i] + f[i + 1]);
    }
    return sum;
}

double simpson(const std::vector<double>& t, const std::vector<double>& f) {
    if (t.size() < 2) return 0.0;
    if (t.size() == 2) return trapezoid(t, f);
    double sum = 0.0;
    size_t i = 0;
    for (; i + 2 < t.size(); i += 2) {
        sum += integrate_quadratic(t[i], f[i], t[i + 1], f[i + 1], t[i + 2], f[i + 2], t[i],
                                   t[i + 2]);
    }
    if (i + 1 < t.size()) {
        // Odd tail: reuse the quadratic through the last three points.
        const size_t k = t.size() - 3;
        sum += integrate_quadratic(t[k], f[k], t[k + 1], f[k + 1], t[k + 2], f[k + 2], t[k + 1],
                                   t[k + 2]);
    }
    return sum;
}

}  // namespace

Vector Signal::at(double t) const {
    if (samples.empty()) throw Error("signal has no samples");
    return interp_cubic(grid, samples, t);
}

Matrix ControlLaw::gain_at(double t) const {
    if (kind == Kind::constant) return constant_gain;
    if (gains.empty()) throw Error("time-varying law has no gain samples");
    return interp_cubic(grid, gains, t);
}

Vector ControlLaw::free_at(double t) const {
    if (!free_signal) return Vector::Zero(projector.cols());
    return free_signal->at(t);
}

ControlLaw control_family(const ControlLaw& law, const Signal& v) {
    if (v.samples.empty() || v.grid.size() != v.samples.size()) {
        throw DimensionMismatch("free signal needs one sample per grid stamp");
    }
    const Index m = law.projector.cols();
    for (const Vector& sample : v.samples) {
        if (sample.size() != m) {
            throw DimensionMismatch("free signal samples must have the input dimension");
        }
    }
    ControlLaw with_signal = law;
    with_signal.free_signal = v;
    return with_signal;
}

Trajectory simulate_closed_loop(const ProblemData& sigma, const ControlLaw& law,
                                const Vector& x0, double horizon, const GridSpec& grid,
                                const OdeSettings& ode) {
    check_dimensions(sigma);
    if (x0.size() != sigma.n()) throw DimensionMismatch("x0 must match the state dimension");
    if (horizon <= 0.0) throw Error("horizon must be positive");

    const Matrix pi = sigma.pi();
    const auto input_at = [&](double t, const Vector& x) -> Vector {
        return -(law.gain_at(t) * x) + law.projector * law.free_at(t);
    };
    const MatrixRhs rhs = [&](double t, const Matrix& x) -> Matrix {
        return sigma.A * x + sigma.B * input_at(t, x.col(0));
    };

    detail::GrowthTracker tracker;
    tracker.record(0.0, x0.norm());
    const StepObserver observe = [&tracker](double t, const Matrix& x) {
        tracker.record(t, x.norm());
        return true;
    };

    Trajectory traj;
    traj.grid = uniform_grid(0.0, horizon, grid.samples);
    traj.states.reserve(traj.grid.size());
    traj.states.push_back(x0);

    double t = 0.0;
    Matrix x = x0;
    OdeSettings leg_settings = ode;
    for (size_t i = 1; i < traj.grid.size(); ++i) {
        const OdeOutcome leg = advance_to(rhs, t, x, traj.grid[i], leg_settings, {}, observe);
        leg_settings.initial_step = leg.last_step;
        if (leg.status != OdeStatus::reached_target) {
            std::ostringstream oss;
            oss << "closed-loop state "
                << (leg.status == OdeStatus::norm_ceiling ? "exceeded the norm ceiling"
                                                          : "hit step underflow")
                << " at t = " << leg.time;
            throw IntegrationDiverged(oss.str(), leg.time, tracker.rate(), tracker.classify());
        }
        traj.states.push_back(x.col(0));
    }

    traj.inputs.reserve(traj.grid.size());
    traj.integrand.reserve(traj.grid.size());
    for (size_t i = 0; i < traj.grid.size(); ++i) {
        const Vector u = input_at(traj.grid[i], traj.states[i]);
        traj.inputs.push_back(u);
        Vector xu(sigma.n() + sigma.m());
        xu << traj.states[i], u;
        traj.integrand.push_back(xu.dot(pi * xu));
    }
    return traj;
}

CostEstimate evaluate_cost(const Trajectory& traj, const ProblemData& sigma,
                           const std::optional<Matrix>& H) {
    if (traj.grid.size() != traj.integrand.size() || traj.grid.size() < 2) {
        throw Error("trajectory must carry integrand samples on at least two stamps");
    }
    CostEstimate est;
    est.value = simpson(traj.grid, traj.integrand);
    est.quadrature_error = std::abs(est.value - trapezoid(traj.grid, traj.integrand));
    if (H) {
        if (H->rows() != sigma.n() || H->cols() != sigma.n()) {
            throw DimensionMismatch("terminal penalty must match the state dimension");
        }
        const Vector& xT = traj.states.back();
        est.value += xT.dot(*H * xT);
    }
    return est;
}

LQSolution solve_finite(const FiniteHorizonProblem& p, const SolveSettings& settings) {
    check_dimensions(p.sigma);
    if (p.x0.size() != p.sigma.n()) {
        throw DimensionMismatch("x0 must match the state dimension");
    }
    if (p.horizon <= 0.0) throw Error("horizon must be positive");

    const DerivedData d = derive(p.sigma, settings.grde.rank_tol);
    const Subspace reach = reachable_subspace(d.F, d.B2, settings.grde.rank_tol);
    const double coupling = reach.is_trivial() ? 0.0 : (p.H * reach.basis).norm();

    LQSolution sol;
    Matrix H_used = p.H;
    if (coupling > settings.reduction_tol * std::max(1.0, p.H.norm())) {
        if (!settings.auto_reduce_terminal_penalty) {
            throw TerminalPenaltyNotReduced(
                "terminal penalty couples into the free state directions and automatic "
                "reduction is disabled");
        }
        TerminalReduction red = reduce_terminal_penalty(p.sigma, p.H, settings.grde.rank_tol);
        H_used = red.H_reduced;
        sol.terminal_penalty_reduced = true;
        sol.reduction = std::move(red);
    }

    const GRDETrajectory flow =
        grde_backward(p.sigma, H_used, p.horizon, settings.grid, settings.grde);

    ControlLaw law;
    law.kind = ControlLaw::Kind::time_varying;
    law.grid = flow.grid;
    law.gains.reserve(flow.values.size());
    for (const Matrix& P : flow.values) {
        law.gains.push_back(d.R_pinv * (p.sigma.S.transpose() + p.sigma.B.transpose() * P));
    }
    law.projector = d.G;

    sol.value_matrix = flow.values.front();
    sol.optimal_value = p.x0.dot(sol.value_matrix * p.x0);
    sol.law = law;
    sol.trajectory = simulate_closed_loop(p.sigma, law, p.x0, p.horizon, settings.grid,
                                          settings.grde.ode);
    return sol;
}

LQSolution solve_infinite(const ProblemData& sigma, const Vector& x0,
                          const SolveSettings& settings) {
    check_dimensions(sigma);
    if (x0.size() != sigma.n()) throw DimensionMismatch("x0 must match the state dimension");

    const LimitResult limit = care_limit_solution(sigma, settings.limit);
    if (!limit.converged) {
        throw NoConvergence("limit of the forward flow failed certification", limit.time,
                            limit.residual_norm, limit.growth_rate, GrowthClass::decaying);
    }

    const DerivedData d = derive(sigma, settings.limit.rank_tol);
    ControlLaw law;
    law.kind = ControlLaw::Kind::constant;
    law.constant_gain =
        d.R_pinv * (sigma.S.transpose() + sigma.B.transpose() * limit.Xbar);
    law.projector = d.G;

    LQSolution sol;
    sol.value_matrix = limit.Xbar;
    sol.optimal_value = x0.dot(limit.Xbar * x0);
    sol.law = law;
    sol.trajectory = simulate_closed_loop(sigma, law, x0, settings.sim_horizon, settings.grid,
                                          settings.limit.ode);
    return sol;
}

FinitenessProbe finiteness_probe(const ProblemData& sigma, double tol) {
    check_dimensions(sigma);
    const Index n = sigma.n();
    Eigen::EigenSolver<Matrix> es(sigma.A);
    if (es.info() != Eigen::Success) return FinitenessProbe::unknown;

    for (Index i = 0; i < n; ++i) {
        const std::complex<double> lambda = es.eigenvalues()(i);
        if (lambda.real() < -tol) continue;  // stable modes need no control
        Eigen::MatrixXcd pencil(n, n + sigma.m());
        pencil << sigma.A.cast<std::complex<double>>() -
                      lambda * Eigen::MatrixXcd::Identity(n, n),
            sigma.B.cast<std::complex<double>>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil);
        const double cutoff =
            RankTolerance{}.threshold(svd.singularValues().maxCoeff());
        Index rank = 0;
        for (Index k = 0; k < svd.singularValues().size(); ++k) {
            if (svd.singularValues()(k) > cutoff) ++rank;
        }
        if (rank < n) return FinitenessProbe::unknown;
    }
    return FinitenessProbe::sufficient_pass;
}

}  // namespace cgcare
