#include "cgcare/ode.hpp"

#include "cgcare/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cgcare {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double b5 = -2187.0 / 6784;
constexpr double e5 = b5 + 92097.0 / 339200;

double max_norm(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double initial_step_guess(const MatrixRhs& rhs, double t, const Matrix& Y, double span,
                          const OdeSettings& s) {
    if (s.initial_step > 0.0) return std::min(s.initial_step, span);
    const double d0 = std::max(max_norm(Y), 1.0);
    const double d1 = max_norm(rhs(t, Y));
    double h = (d1 > 1e-12) ? 0.01 * d0 / d1 : span / 100.0;
    return std::clamp(h, span * 1e-8, span / 10.0);
}

}  // namespace

OdeOutcome advance_to(const MatrixRhs& rhs, double& t, Matrix& Y, double t_target,
                      const OdeSettings& s, const StepTransform& transform,
                      const StepObserver& observer) {
    OdeOutcome out;
    const double span = t_target - t;
    if (span <= 0.0) {
        out.time = t;
        return out;
    }
    double h = initial_step_guess(rhs, t, Y, span, s);
    if (s.max_step > 0.0) h = std::min(h, s.max_step);
    const auto finish = [&](OdeStatus status) {
        out.status = status;
        out.time = t;
        out.last_step = h;
        return out;
    };

    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (t < t_target) {
        const bool clamped = t + h >= t_target;
        const double step = clamped ? t_target - t : h;
        if (step < 32 * eps * std::max(1.0, std::abs(t))) {
            return finish(OdeStatus::step_underflow);
        }

        const Matrix k1 = rhs(t, Y);
        const Matrix k2 = rhs(t + step * a21, Y + step * (a21 * k1));
        const Matrix k3 = rhs(t + step * 0.3, Y + step * (a31 * k1 + a32 * k2));
        const Matrix k4 = rhs(t + step * 0.8, Y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix k5 =
            rhs(t + step * (8.0 / 9), Y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix k6 =
            rhs(t + step, Y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Matrix y5 = Y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix k7 = rhs(t + step, y5);
        const Matrix err_mat =
            step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double tol = s.abs_tol + s.rel_tol * std::max(max_norm(Y), max_norm(y5));
        const double err = max_norm(err_mat) / tol;

        if (err <= 1.0) {
            t += step;
            Y = y5;
            if (transform) transform(Y);
            ++out.accepted_steps;
            if (max_norm(Y) > s.norm_ceiling) {
                return finish(OdeStatus::norm_ceiling);
            }
            const double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = step * std::clamp(factor, 0.2, 5.0);
            if (s.max_step > 0.0) h = std::min(h, s.max_step);
            if (observer && !observer(t, Y)) {
                return finish(OdeStatus::stopped_by_observer);
            }
        } else {
            ++out.rejected_steps;
            h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
        if (s.max_step > 0.0) h = std::min(h, s.max_step);
    }
    return finish(OdeStatus::reached_target);
}

std::vector<Matrix> integrate_on_grid(const MatrixRhs& rhs, const Matrix& Y0,
                                      std::span<const double> grid, const OdeSettings& s,
                                      const StepTransform& transform, OdeOutcome& outcome) {
    std::vector<Matrix> values;
    if (grid.empty()) return values;
    values.reserve(grid.size());
    values.push_back(Y0);

    double t = grid[0];
    Matrix Y = Y0;
    outcome = OdeOutcome{};
    OdeSettings leg_settings = s;
    for (size_t i = 1; i < grid.size(); ++i) {
        OdeOutcome leg = advance_to(rhs, t, Y, grid[i], leg_settings, transform);
        leg_settings.initial_step = leg.last_step;
        outcome.accepted_steps += leg.accepted_steps;
        outcome.rejected_steps += leg.rejected_steps;
        outcome.time = leg.time;
        if (leg.status != OdeStatus::reached_target) {
            outcome.status = leg.status;
            return values;
        }
        values.push_back(Y);
    }
    outcome.status = OdeStatus::reached_target;
    return values;
}

std::vector<double> uniform_grid(double t0, double t1, int samples) {
    if (samples < 2 || t1 <= t0) {
        throw Error("uniform_grid needs at least two samples and a positive span");
    }
    std::vector<double> grid(static_cast<size_t>(samples));
    const double h = (t1 - t0) / (samples - 1);
    for (int i = 0; i < samples; ++i) grid[static_cast<size_t>(i)] = t0 + h * i;
    grid.back() = t1;
    return grid;
}

}  // namespace cgcare
