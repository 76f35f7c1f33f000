#pragma once

// Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)) for
// matrix-valued initial value problems. Step-size control works on the
// entrywise max-norm. Steps are clamped so that requested output times are
// hit exactly; no interpolation is performed.

#include "cgcare/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace cgcare {

struct OdeSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;   // 0 -> heuristic from the first derivative
    double max_step = 0.0;       // 0 -> unrestricted
    double norm_ceiling = 1e8;   // abort when the state max-norm exceeds this
};

enum class OdeStatus {
    reached_target,       // integrated through the requested time
    stopped_by_observer,  // the per-step callback asked to stop
    norm_ceiling,         // state norm exceeded the ceiling
    step_underflow,       // error control drove the step below resolution
};

struct OdeOutcome {
    OdeStatus status = OdeStatus::reached_target;
    double time = 0.0;      // time reached
    long accepted_steps = 0;
    long rejected_steps = 0;
    double last_step = 0.0;  // adapted step size, usable as the next initial_step
};

/// Right-hand side of Y' = f(t, Y).
using MatrixRhs = std::function<Matrix(double, const Matrix&)>;

/// Applied to the state after every accepted step (e.g. re-symmetrization).
using StepTransform = std::function<void(Matrix&)>;

/// Called after every accepted step (post transform); return false to stop.
using StepObserver = std::function<bool(double, const Matrix&)>;

/// Advances (t, Y) in place from t to t_target (t_target > t).
OdeOutcome advance_to(const MatrixRhs& rhs, double& t, Matrix& Y, double t_target,
                      const OdeSettings& settings, const StepTransform& transform = {},
                      const StepObserver& observer = {});

/// Integrates from (grid.front(), Y0) recording the state at every stamp.
/// The grid must be strictly increasing. Returns the states; `outcome`
/// reports how far integration got (values past the failure point are
/// absent from the result).
std::vector<Matrix> integrate_on_grid(const MatrixRhs& rhs, const Matrix& Y0,
                                      std::span<const double> grid,
                                      const OdeSettings& settings,
                                      const StepTransform& transform, OdeOutcome& outcome);

/// Uniform grid of `samples` stamps covering [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, int samples);

}  // namespace cgcare
