#pragma once

// Small named problems reused across the test suites.

#include "cgcare/problem.hpp"

namespace testsupport {

using cgcare::Matrix;
using cgcare::ProblemData;
using cgcare::Vector;

inline Matrix m11(double v) {
    Matrix M(1, 1);
    M << v;
    return M;
}

/// Scalar integrator with unit weights: forward flow tanh(t), limit 1.
inline ProblemData sigma_e1() {
    return ProblemData{m11(0.0), m11(1.0), m11(1.0), m11(0.0), m11(1.0)};
}

/// Two decoupled states, the second cost-free through a singular R.
inline ProblemData sigma_e2() {
    ProblemData sigma;
    sigma.A = Matrix::Zero(2, 2);
    sigma.B = Matrix::Identity(2, 2);
    sigma.Q = Matrix::Zero(2, 2);
    sigma.Q(0, 0) = 1.0;
    sigma.S = Matrix::Zero(2, 2);
    sigma.R = Matrix::Zero(2, 2);
    sigma.R(0, 0) = 1.0;
    return sigma;
}

/// Stable state with no state cost: limit solution 0.
inline ProblemData sigma_e3() {
    return ProblemData{m11(-1.0), m11(1.0), m11(0.0), m11(0.0), m11(1.0)};
}

/// R = 0 with a nonzero state cost: the forward flow is X(t) = t and no
/// solution exists.
inline ProblemData sigma_divergent() {
    return ProblemData{m11(0.0), m11(1.0), m11(1.0), m11(0.0), m11(0.0)};
}

}  // namespace testsupport
