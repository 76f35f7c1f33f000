#include "cgcare/geometry.hpp"

#include "cgcare/errors.hpp"
#include "cgcare/matlin.hpp"

namespace cgcare {

namespace {

void check_quadruple(const Quadruple& q) {
    if (q.A.rows() != q.A.cols()) throw DimensionMismatch("A must be square");
    if (q.B.rows() != q.A.rows()) throw DimensionMismatch("B must have as many rows as A");
    if (q.C.cols() != q.A.cols()) throw DimensionMismatch("C must have as many columns as A");
    if (q.D.rows() != q.C.rows() || q.D.cols() != q.B.cols())
        throw DimensionMismatch("D must be output-by-input sized");
}

}  // namespace

Subspace reachable_subspace(const Matrix& M, const Matrix& N, RankTolerance tol) {
    if (M.rows() != M.cols() || N.rows() != M.rows()) {
        throw DimensionMismatch("reachable_subspace expects square M and matching N");
    }
    Subspace reach = image_basis(N, tol);
    for (Index k = 0; k < M.rows(); ++k) {
        const Subspace next = subspace_sum(reach, image_basis(M * reach.basis, tol));
        if (next.dim() == reach.dim()) break;
        reach = next;
    }
    return reach;
}

Subspace largest_output_nulling(const Quadruple& q, RankTolerance tol) {
    check_quadruple(q);
    const Index n = q.A.rows();
    const Index p = q.C.rows();

    Matrix AC(n + p, n);
    AC << q.A, q.C;
    Matrix BD(n + p, q.B.cols());
    BD << q.B, q.D;

    Subspace V = Subspace::full(n, tol);
    for (Index k = 0; k <= n; ++k) {
        // (V ⊕ {0}) + im [B; D] inside R^{n+p}.
        Matrix lifted = Matrix::Zero(n + p, V.dim());
        lifted.topRows(n) = V.basis;
        Matrix span(n + p, V.dim() + BD.cols());
        span << lifted, BD;
        const Subspace W = image_basis(span, tol);
        // Preimage of W under [A; C]: kernel of the complement projector
        // applied to [A; C].
        const Matrix complement = (Matrix::Identity(n + p, n + p) - W.projector()) * AC;
        const Subspace next = kernel_basis(complement, tol);
        if (next.dim() == V.dim()) break;
        V = next;
    }
    return V;
}

Subspace smallest_input_containing(const Quadruple& q, RankTolerance tol) {
    check_quadruple(q);
    const Index n = q.A.rows();
    const Index m = q.B.cols();

    Matrix AB(n, n + m);
    AB << q.A, q.B;
    Matrix CD(q.C.rows(), n + m);
    CD << q.C, q.D;
    const Subspace ker_CD = kernel_basis(CD, tol);

    Subspace S = Subspace::zero(n, tol);
    for (Index k = 0; k <= n; ++k) {
        // (S ⊕ R^m) ∩ ker [C D] inside R^{n+m}; the lifted columns are
        // orthonormal by construction.
        Matrix lifted = Matrix::Zero(n + m, S.dim() + m);
        lifted.block(0, 0, n, S.dim()) = S.basis;
        lifted.block(n, S.dim(), m, m) = Matrix::Identity(m, m);
        const Subspace cross = subspace_intersect(Subspace{n + m, lifted, tol}, ker_CD);
        const Subspace next = image_basis(AB * cross.basis, tol);
        if (next.dim() == S.dim()) break;
        S = next;
    }
    return S;
}

Subspace largest_reachability(const Quadruple& q, RankTolerance tol) {
    return subspace_intersect(largest_output_nulling(q, tol), smallest_input_containing(q, tol));
}

GeometryReport geometry_report(const ProblemData& sigma, RankTolerance tol) {
    const DerivedData d = derive(sigma, tol);
    const Quadruple q{sigma.A, sigma.B, d.C, d.D};

    GeometryReport report;
    report.Vstar = largest_output_nulling(q, tol);
    report.Sstar = smallest_input_containing(q, tol);
    report.Rstar = subspace_intersect(report.Vstar, report.Sstar);
    report.reach_F_B2 = reachable_subspace(d.F, d.B2, tol);
    report.identity_SR = subspace_equal(report.Sstar, report.Rstar);
    report.crosscheck_R =
        subspace_equal(report.Rstar, reachable_subspace(d.A0, sigma.B * d.G, tol));
    return report;
}

}  // namespace cgcare
