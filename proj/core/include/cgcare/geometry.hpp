#pragma once

// Geometric control subspaces of a quadruple (A, B, C, D): the reachable
// subspace of a matrix pair, the largest output-nulling subspace, the
// smallest input-containing subspace, and the largest reachability
// output-nulling subspace, together with the identity checks linking them
// to the Riccati problem data.

#include "cgcare/problem.hpp"
#include "cgcare/types.hpp"

namespace cgcare {

struct Quadruple {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m
};

/// Smallest M-invariant subspace containing im N: the span of
/// [N, M N, ..., M^{n-1} N], built by iterated image sums with a rank
/// stagnation stop.
Subspace reachable_subspace(const Matrix& M, const Matrix& N, RankTolerance tol = {});

/// Largest output-nulling subspace V*: limit of V_0 = R^n,
/// V_{k+1} = { x : [A; C] x ∈ (V_k ⊕ {0}) + im [B; D] }.
/// The recursion is monotone decreasing and stagnates within n steps.
Subspace largest_output_nulling(const Quadruple& q, RankTolerance tol = {});

/// Smallest input-containing subspace S*: limit of S_0 = {0},
/// S_{k+1} = [A B] ((S_k ⊕ R^m) ∩ ker [C D]).
/// The recursion is monotone increasing and stagnates within n steps.
Subspace smallest_input_containing(const Quadruple& q, RankTolerance tol = {});

/// Largest reachability output-nulling subspace R* = V* ∩ S*.
Subspace largest_reachability(const Quadruple& q, RankTolerance tol = {});

struct GeometryReport {
    Subspace Vstar;
    Subspace Rstar;
    Subspace Sstar;
    Subspace reach_F_B2;   // reachable subspace of (F, B2)
    bool identity_SR = false;   // S* equals R*
    bool crosscheck_R = false;  // R* equals the reachable subspace of (A0, B G)
};

/// Factorizes the joint weight into (C, D), computes the four subspaces for
/// the induced quadruple (A, B, C, D), and evaluates both identities.
GeometryReport geometry_report(const ProblemData& sigma, RankTolerance tol = {});

}  // namespace cgcare
