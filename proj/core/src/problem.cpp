#include "cgcare/problem.hpp"

#include "cgcare/errors.hpp"
#include "cgcare/matlin.hpp"

#include <Eigen/Eigenvalues>

namespace cgcare {

Matrix ProblemData::pi() const {
    Matrix pi(n() + m(), n() + m());
    pi << Q, S, S.transpose(), R;
    return pi;
}

void check_dimensions(const ProblemData& sigma) {
    const Index n = sigma.A.rows();
    const Index m = sigma.B.cols();
    if (sigma.A.cols() != n) throw DimensionMismatch("A must be square");
    if (sigma.B.rows() != n) throw DimensionMismatch("B must have as many rows as A");
    if (sigma.Q.rows() != n || sigma.Q.cols() != n)
        throw DimensionMismatch("Q must match the state dimension");
    if (sigma.S.rows() != n || sigma.S.cols() != m)
        throw DimensionMismatch("S must be state-by-input sized");
    if (sigma.R.rows() != m || sigma.R.cols() != m)
        throw DimensionMismatch("R must match the input dimension");
}

ValidationReport validate(const ProblemData& sigma, RankTolerance rank_tol, double psd_tol) {
    check_dimensions(sigma);
    require_finite(sigma.A, "A");
    require_finite(sigma.B, "B");
    require_finite(sigma.Q, "Q");
    require_finite(sigma.S, "S");
    require_finite(sigma.R, "R");

    ValidationReport report;
    report.q_symmetry_defect = (sigma.Q - sigma.Q.transpose()).norm();
    report.r_symmetry_defect = (sigma.R - sigma.R.transpose()).norm();

    const Matrix pi = symmetrized(sigma.pi());
    Eigen::SelfAdjointEigenSolver<Matrix> es(pi, Eigen::EigenvaluesOnly);
    report.pi_min_eigenvalue = es.eigenvalues().minCoeff();
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const double sym_scale = std::max(1.0, pi.cwiseAbs().maxCoeff());
    report.pi_psd = report.pi_min_eigenvalue >= -psd_tol * scale &&
                    report.q_symmetry_defect <= psd_tol * sym_scale &&
                    report.r_symmetry_defect <= psd_tol * sym_scale;

    const Subspace ker_R = kernel_basis(sigma.R, rank_tol);
    report.kernel_inclusion_defect = ker_R.is_trivial() ? 0.0 : (sigma.S * ker_R.basis).norm();
    report.kernel_inclusion_ok =
        report.kernel_inclusion_defect <= psd_tol * std::max(1.0, sigma.S.norm());
    return report;
}

DerivedData derive(const ProblemData& sigma, RankTolerance rank_tol) {
    check_dimensions(sigma);
    DerivedData d;
    d.G = kernel_projector(sigma.R, rank_tol);
    d.T1 = image_basis(sigma.R, rank_tol).basis;
    d.T2 = kernel_basis(sigma.R, rank_tol).basis;
    d.B1 = sigma.B * d.T1;
    d.B2 = sigma.B * d.T2;
    d.R_pinv = pseudo_inverse(sigma.R, rank_tol);
    d.F = sigma.A - sigma.B * d.R_pinv * sigma.S.transpose();
    d.Lambda = symmetrized(sigma.Q - sigma.S * d.R_pinv * sigma.S.transpose());
    d.A0 = sigma.A - sigma.B * d.R_pinv * sigma.S.transpose();
    d.Q0 = symmetrized(sigma.Q - sigma.S * d.R_pinv * sigma.S.transpose());
    d.rank_R = numerical_rank(sigma.R, rank_tol);

    const Matrix pi = sigma.pi();
    std::tie(d.C, d.D) = output_factorization(pi, sigma.n(), rank_tol);
    d.rank_Pi = d.C.rows();
    d.C0 = d.C - d.D * d.R_pinv * sigma.S.transpose();
    return d;
}

std::pair<Matrix, Matrix> output_factorization(const Matrix& pi, Index n,
                                               RankTolerance rank_tol, double psd_tol) {
    if (pi.rows() != pi.cols() || n > pi.rows()) {
        throw DimensionMismatch("output_factorization expects a square joint weight");
    }
    if (!is_psd(pi, psd_tol)) {
        throw NotPSD("joint weight is not positive semidefinite");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(pi));
    const Vector lambda = es.eigenvalues();
    const double cutoff = rank_tol.threshold(lambda.cwiseAbs().maxCoeff());

    // Rows of W = sqrt(lambda_i) v_i^T for the eigenvalues above the cutoff.
    Index p = 0;
    for (Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > cutoff) ++p;
    }
    Matrix W(p, pi.cols());
    Index row = 0;
    for (Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > cutoff) {
            W.row(row++) = std::sqrt(lambda(i)) * es.eigenvectors().col(i).transpose();
        }
    }
    return {W.leftCols(n), W.rightCols(pi.cols() - n)};
}

XDerived x_derived(const ProblemData& sigma, const Matrix& X, RankTolerance rank_tol) {
    check_dimensions(sigma);
    if (X.rows() != sigma.n() || X.cols() != sigma.n()) {
        throw DimensionMismatch("X must match the state dimension");
    }
    if (!is_symmetric(X)) {
        throw NotSymmetric("X must be symmetric");
    }
    XDerived xd;
    xd.Q_X = sigma.Q + sigma.A.transpose() * X + X * sigma.A;
    xd.S_X = sigma.S + X * sigma.B;
    xd.K_X = pseudo_inverse(sigma.R, rank_tol) * xd.S_X.transpose();
    xd.A_X = sigma.A - sigma.B * xd.K_X;
    xd.Pi_X.resize(sigma.n() + sigma.m(), sigma.n() + sigma.m());
    xd.Pi_X << xd.Q_X, xd.S_X, xd.S_X.transpose(), sigma.R;
    return xd;
}

}  // namespace cgcare
