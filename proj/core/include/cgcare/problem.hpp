#pragma once

// The linear-quadratic problem data (A, B, Q, S, R), its validation against
// the standing positive-semidefiniteness assumption on the joint weight, and
// the quantities derived once from it: the kernel projector of R, the split
// of the input channels, the cross-term-free pair (F, Lambda), and an output
// factorization of the joint weight.

#include "cgcare/types.hpp"

namespace cgcare {

struct ProblemData {
    Matrix A;  // n x n state matrix
    Matrix B;  // n x m input matrix
    Matrix Q;  // n x n state weight
    Matrix S;  // n x m cross weight
    Matrix R;  // m x m input weight

    Index n() const { return A.rows(); }
    Index m() const { return B.cols(); }

    /// Joint weight [[Q, S], [S^T, R]].
    Matrix pi() const;
};

/// Throws DimensionMismatch unless all five blocks are mutually consistent.
void check_dimensions(const ProblemData& sigma);

struct ValidationReport {
    bool pi_psd = false;
    double pi_min_eigenvalue = 0.0;
    double q_symmetry_defect = 0.0;  // ‖Q - Q^T‖
    double r_symmetry_defect = 0.0;  // ‖R - R^T‖
    bool kernel_inclusion_ok = false;
    double kernel_inclusion_defect = 0.0;  // ‖S v‖ over unit v in ker R

    bool passed() const { return pi_psd && kernel_inclusion_ok; }
};

/// Checks the standing assumption (joint weight symmetric PSD) and the
/// induced inclusion ker R ⊆ ker S. Failures are reported, not thrown;
/// only inconsistent dimensions raise DimensionMismatch.
ValidationReport validate(const ProblemData& sigma, RankTolerance rank_tol = {},
                          double psd_tol = 1e-9);

struct DerivedData {
    Matrix G;       // m x m orthogonal projector onto ker R
    Matrix T1;      // orthonormal basis of im R
    Matrix T2;      // orthonormal basis of ker R
    Matrix B1;      // B T1
    Matrix B2;      // B T2
    Matrix F;       // A - B R^+ S^T
    Matrix Lambda;  // Q - S R^+ S^T (generalised Schur complement, PSD)
    Matrix A0;      // same formula as F, kept under its second name
    Matrix Q0;      // same formula as Lambda
    Matrix C;       // p x n with [C D]^T [C D] = joint weight
    Matrix D;       // p x m
    Matrix C0;      // C - D R^+ S^T
    Matrix R_pinv;  // R^+
    Index rank_R = 0;
    Index rank_Pi = 0;
};

/// Computes every derived quantity. Expects validate() to have passed.
DerivedData derive(const ProblemData& sigma, RankTolerance rank_tol = {});

/// Rank-revealing factorization of a PSD joint weight Pi into [C D]^T [C D]
/// with p = numerical rank of Pi rows; n fixes the column split.
/// Throws NotPSD when Pi is not positive semidefinite.
std::pair<Matrix, Matrix> output_factorization(const Matrix& pi, Index n,
                                               RankTolerance rank_tol = {},
                                               double psd_tol = 1e-9);

/// The matrices associated with a symmetric candidate X.
struct XDerived {
    Matrix Q_X;   // Q + A^T X + X A
    Matrix S_X;   // S + X B
    Matrix K_X;   // R^+ S_X^T
    Matrix A_X;   // A - B K_X
    Matrix Pi_X;  // [[Q_X, S_X], [S_X^T, R]]
};

/// Throws NotSymmetric when X is not symmetric within tolerance.
XDerived x_derived(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol = {});

}  // namespace cgcare
