#pragma once

// Rank-revealing dense linear algebra: pseudo-inverses, kernel projectors,
// orthonormal image/kernel bases, PSD tests and square roots, and the
// subspace algebra built on top of them. Everything here is a pure function
// on immutable values.

#include "cgcare/errors.hpp"
#include "cgcare/types.hpp"

namespace cgcare {

/// Throws InvalidMatrix if M contains NaN or infinite entries.
void require_finite(const Matrix& M, const char* what = "matrix");

bool is_symmetric(const Matrix& M, double tol = 1e-9);

/// (M + M^T) / 2
Matrix symmetrized(const Matrix& M);

Index numerical_rank(const Matrix& M, RankTolerance tol = {});

/// Moore-Penrose pseudo-inverse; singular values below the cutoff are
/// treated as zero.
Matrix pseudo_inverse(const Matrix& M, RankTolerance tol = {});

/// Orthogonal projector onto ker R for square symmetric R:
/// G = I - R^+ R, satisfying G^2 = G, G = G^T and R G = 0.
Matrix kernel_projector(const Matrix& R, RankTolerance tol = {});

/// Orthonormal basis of the column space of M.
Subspace image_basis(const Matrix& M, RankTolerance tol = {});

/// Orthonormal basis of the null space of M.
Subspace kernel_basis(const Matrix& M, RankTolerance tol = {});

/// True iff M is symmetric within tol and its smallest eigenvalue is
/// >= -tol * scale, where scale is the largest eigenvalue magnitude
/// (at least 1).
bool is_psd(const Matrix& M, double tol = 1e-9);

/// Symmetric PSD square root N with N * N = M. Throws NotPSD.
Matrix psd_sqrt(const Matrix& M, double tol = 1e-9);

/// True iff inner is contained in outer, decided by the largest principal
/// angle: sin(theta_max) <= tol.
bool subspace_contains(const Subspace& outer, const Subspace& inner, double tol = 1e-8);

bool subspace_equal(const Subspace& a, const Subspace& b, double tol = 1e-8);

/// a + b, orthonormalized from the concatenated bases.
Subspace subspace_sum(const Subspace& a, const Subspace& b);

/// a ∩ b, computed as the kernel of the stacked complement projectors.
Subspace subspace_intersect(const Subspace& a, const Subspace& b);

}  // namespace cgcare
