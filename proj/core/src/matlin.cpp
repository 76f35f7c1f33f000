#include "cgcare/matlin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <string>

namespace cgcare {

void require_finite(const Matrix& M, const char* what) {
    if (!M.allFinite()) {
        throw InvalidMatrix(std::string(what) + " contains non-finite entries");
    }
}

bool is_symmetric(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) return false;
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix symmetrized(const Matrix& M) { return 0.5 * (M + M.transpose()); }

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& M) {
    return Eigen::JacobiSVD<Matrix>(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Index rank_from_svd(const Eigen::JacobiSVD<Matrix>& svd, RankTolerance tol) {
    if (svd.singularValues().size() == 0) return 0;
    const double cutoff = tol.threshold(svd.singularValues()(0));
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > cutoff) ++r;
    }
    return r;
}

}  // namespace

Index numerical_rank(const Matrix& M, RankTolerance tol) {
    require_finite(M);
    if (M.size() == 0) return 0;
    return rank_from_svd(full_svd(M), tol);
}

Matrix pseudo_inverse(const Matrix& M, RankTolerance tol) {
    require_finite(M);
    if (M.size() == 0) return Matrix::Zero(M.cols(), M.rows());
    const auto svd = full_svd(M);
    const Index r = rank_from_svd(svd, tol);
    Matrix inv_sigma = Matrix::Zero(M.cols(), M.rows());
    for (Index i = 0; i < r; ++i) {
        inv_sigma(i, i) = 1.0 / svd.singularValues()(i);
    }
    return svd.matrixV() * inv_sigma * svd.matrixU().transpose();
}

Matrix kernel_projector(const Matrix& R, RankTolerance tol) {
    if (R.rows() != R.cols()) {
        throw DimensionMismatch("kernel_projector expects a square matrix");
    }
    require_finite(R);
    const Index m = R.rows();
    Matrix G = Matrix::Identity(m, m) - pseudo_inverse(R, tol) * R;
    return symmetrized(G);
}

Subspace image_basis(const Matrix& M, RankTolerance tol) {
    require_finite(M);
    if (M.size() == 0) return Subspace::zero(M.rows(), tol);
    const auto svd = full_svd(M);
    const Index r = rank_from_svd(svd, tol);
    return Subspace{M.rows(), svd.matrixU().leftCols(r), tol};
}

Subspace kernel_basis(const Matrix& M, RankTolerance tol) {
    require_finite(M);
    if (M.rows() == 0 || M.cols() == 0) return Subspace::full(M.cols(), tol);
    const auto svd = full_svd(M);
    const Index r = rank_from_svd(svd, tol);
    return Subspace{M.cols(), svd.matrixV().rightCols(M.cols() - r), tol};
}

bool is_psd(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) {
        throw DimensionMismatch("is_psd expects a square matrix");
    }
    require_finite(M);
    if (M.size() == 0) return true;
    if (!is_symmetric(M, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(M), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    return ev.minCoeff() >= -tol * scale;
}

Matrix psd_sqrt(const Matrix& M, double tol) {
    if (!is_psd(M, tol)) {
        throw NotPSD("psd_sqrt expects a symmetric positive semidefinite matrix");
    }
    if (M.size() == 0) return M;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(M));
    Vector lambda = es.eigenvalues().cwiseMax(0.0);
    return symmetrized(es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
                       es.eigenvectors().transpose());
}

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim != b.ambient_dim) {
        throw DimensionMismatch("subspaces live in different ambient spaces");
    }
}

}  // namespace

bool subspace_contains(const Subspace& outer, const Subspace& inner, double tol) {
    require_same_ambient(outer, inner);
    if (inner.is_trivial()) return true;
    // Bounds sin of the largest principal angle between inner and outer.
    const Matrix residual = inner.basis - outer.basis * (outer.basis.transpose() * inner.basis);
    return residual.norm() <= tol;
}

bool subspace_equal(const Subspace& a, const Subspace& b, double tol) {
    return subspace_contains(a, b, tol) && subspace_contains(b, a, tol);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b);
    Matrix stacked(a.ambient_dim, a.dim() + b.dim());
    stacked << a.basis, b.basis;
    return image_basis(stacked, a.tol);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b);
    const Index n = a.ambient_dim;
    // x lies in both subspaces iff both complement projectors annihilate it.
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = Matrix::Identity(n, n) - a.projector();
    stacked.bottomRows(n) = Matrix::Identity(n, n) - b.projector();
    return kernel_basis(stacked, a.tol);
}

}  // namespace cgcare
