#pragma once

#include <Eigen/Dense>

#include <algorithm>

namespace cgcare {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular-value cutoff used by every rank decision in the library.
/// A singular value is treated as zero when it falls below
/// max(absolute, relative * largest_singular_value).
struct RankTolerance {
    double relative = 1e-10;
    double absolute = 1e-12;

    double threshold(double largest_singular_value) const {
        return std::max(absolute, relative * largest_singular_value);
    }
};

/// A subspace of R^n stored as an orthonormal-column basis.
/// The trivial subspace {0} carries a basis with zero columns.
struct Subspace {
    Index ambient_dim = 0;
    Matrix basis;       // ambient_dim x dim, orthonormal columns
    RankTolerance tol;  // rank tolerance used to produce the basis

    Index dim() const { return basis.cols(); }
    bool is_trivial() const { return basis.cols() == 0; }

    /// Orthogonal projector onto the subspace (zero matrix for {0}).
    Matrix projector() const { return basis * basis.transpose(); }

    static Subspace zero(Index ambient, RankTolerance tol = {}) {
        return Subspace{ambient, Matrix::Zero(ambient, 0), tol};
    }
    static Subspace full(Index ambient, RankTolerance tol = {}) {
        return Subspace{ambient, Matrix::Identity(ambient, ambient), tol};
    }
};

}  // namespace cgcare
