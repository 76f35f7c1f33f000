#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgcare/matlin.hpp"
#include "support/oracles.hpp"
#include "support/random_gen.hpp"

#include <limits>

using namespace cgcare;
using testsupport::Rng;

namespace {

Matrix diag2(double a, double b) {
    Matrix M = Matrix::Zero(2, 2);
    M(0, 0) = a;
    M(1, 1) = b;
    return M;
}

}  // namespace

TEST_CASE("pseudo_inverse on fixed cases") {
    CHECK((pseudo_inverse(diag2(2, 0)) - diag2(0.5, 0)).norm() == doctest::Approx(0.0));
    CHECK((pseudo_inverse(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() ==
          doctest::Approx(0.0));

    Matrix ones(2, 2);
    ones << 1, 1, 1, 1;
    const Matrix pinv = pseudo_inverse(ones);
    CHECK((pinv - Matrix::Constant(2, 2, 0.25)).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((ones * pinv * ones - ones).norm() < 1e-12);
    CHECK((ones * pinv - (ones * pinv).transpose()).norm() < 1e-12);
}

TEST_CASE("pseudo_inverse rejects non-finite input") {
    Matrix bad(1, 1);
    bad << std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pseudo_inverse(bad), InvalidMatrix);
}

TEST_CASE("Penrose identities on random matrices of every rank") {
    Rng rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const Index rows = rng.uniform_int(1, 6);
        const Index cols = rng.uniform_int(1, 6);
        const Index rank = rng.uniform_int(0, static_cast<int>(std::min(rows, cols)));
        const Matrix M = testsupport::random_of_rank(rng, rows, cols, rank);
        const Matrix P = pseudo_inverse(M);
        const double scale = std::max(1.0, M.norm());
        CHECK((M * P * M - M).norm() <= 1e-10 * scale);
        CHECK((P * M * P - P).norm() <= 1e-10 * std::max(1.0, P.norm()));
        CHECK((M * P - (M * P).transpose()).norm() <= 1e-10);
        CHECK((P * M - (P * M).transpose()).norm() <= 1e-10);
    }
}

TEST_CASE("kernel_projector on fixed cases") {
    CHECK((kernel_projector(diag2(1, 0)) - diag2(0, 1)).norm() == doctest::Approx(0.0));
    CHECK(kernel_projector(Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));

    Matrix ones(2, 2);
    ones << 1, 1, 1, 1;
    // Projector onto span{(1,-1)}, frozen through the orthonormalized basis.
    Vector v(2);
    v << 1, -1;
    const Matrix expected = (v / v.norm()) * (v / v.norm()).transpose();
    CHECK((kernel_projector(ones) - expected).norm() < 1e-12);
}

TEST_CASE("kernel_projector properties and errors") {
    CHECK_THROWS_AS(kernel_projector(Matrix::Zero(2, 3)), DimensionMismatch);
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Index m = rng.uniform_int(1, 6);
        const Index rank = rng.uniform_int(0, static_cast<int>(m));
        const Matrix R = testsupport::random_psd(rng, m, rank);
        const Matrix G = kernel_projector(R);
        CHECK((G * G - G).norm() < 1e-9);
        CHECK((G - G.transpose()).norm() < 1e-12);
        CHECK((R * G).norm() < 1e-9 * std::max(1.0, R.norm()));
    }
}

TEST_CASE("image and kernel bases") {
    const Subspace image = image_basis(diag2(1, 0));
    REQUIRE(image.dim() == 1);
    CHECK(std::abs(std::abs(image.basis(0, 0)) - 1.0) < 1e-14);

    const Subspace kernel = kernel_basis(diag2(1, 0));
    REQUIRE(kernel.dim() == 1);
    CHECK(std::abs(std::abs(kernel.basis(1, 0)) - 1.0) < 1e-14);

    Matrix tall(2, 1);
    tall << 1, 1;
    const Subspace span = image_basis(tall);
    REQUIRE(span.dim() == 1);
    CHECK(std::abs(std::abs(span.basis(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(span.basis(0, 0) - span.basis(1, 0)) < 1e-14);

    // rank + nullity
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index rows = rng.uniform_int(1, 6);
        const Index cols = rng.uniform_int(1, 6);
        const Index rank = rng.uniform_int(0, static_cast<int>(std::min(rows, cols)));
        const Matrix M = testsupport::random_of_rank(rng, rows, cols, rank);
        CHECK(image_basis(M).dim() == rank);
        CHECK(kernel_basis(M).dim() == cols - rank);
    }
}

TEST_CASE("is_psd") {
    CHECK(is_psd(diag2(1, 0)));
    CHECK_FALSE(is_psd(diag2(1, -1e-3)));
    Matrix M(2, 2);
    M << 2, 1, 1, 2;  // eigenvalues 1 and 3
    CHECK(is_psd(M));
    CHECK_THROWS_AS(is_psd(Matrix::Zero(2, 3)), DimensionMismatch);

    Matrix asym(2, 2);
    asym << 1, 1, -1, 1;
    CHECK_FALSE(is_psd(asym));
}

TEST_CASE("psd_sqrt") {
    CHECK((psd_sqrt(diag2(4, 0)) - diag2(2, 0)).norm() < 1e-12);
    CHECK((psd_sqrt(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm() < 1e-12);

    Matrix M(2, 2);
    M << 2, 1, 1, 2;
    const Matrix N = psd_sqrt(M);
    CHECK((N * N - M).norm() < 1e-12);
    CHECK(is_psd(N));

    CHECK_THROWS_AS(psd_sqrt(diag2(1, -1)), NotPSD);

    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = rng.uniform_int(1, 20);
        const Matrix P = testsupport::random_psd(rng, n, rng.uniform_int(0, static_cast<int>(n)));
        const Matrix root = psd_sqrt(P);
        CHECK((root * root - P).norm() <= 1e-8 * std::max(1.0, P.norm()));
    }
}

TEST_CASE("subspace containment, equality, sum, intersection") {
    const Subspace full2 = Subspace::full(2);
    const Subspace e1 = image_basis(diag2(1, 0));
    CHECK(subspace_contains(full2, e1));
    CHECK_FALSE(subspace_contains(e1, full2));

    // span{e1,e2} ∩ span{e2,e3} = span{e2} in R^3
    Matrix a(3, 2), b(3, 2);
    a << 1, 0, 0, 1, 0, 0;
    b << 0, 0, 1, 0, 0, 1;
    const Subspace cap = subspace_intersect(Subspace{3, a, {}}, Subspace{3, b, {}});
    REQUIRE(cap.dim() == 1);
    CHECK(std::abs(std::abs(cap.basis(1, 0)) - 1.0) < 1e-10);

    // span{(1,1)} + span{(1,-1)} = R^2
    Matrix u(2, 1), v(2, 1);
    u << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    v << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    CHECK(subspace_sum(Subspace{2, u, {}}, Subspace{2, v, {}}).dim() == 2);

    CHECK_THROWS_AS(subspace_contains(full2, Subspace::full(3)), DimensionMismatch);
}

TEST_CASE("containment is reflexive and transitive; equality is mutual containment") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 5;
        const Subspace small = image_basis(rng.gaussian(n, 1));
        const Subspace mid = subspace_sum(small, image_basis(rng.gaussian(n, 1)));
        const Subspace big = subspace_sum(mid, image_basis(rng.gaussian(n, 1)));
        CHECK(subspace_contains(small, small));
        CHECK(subspace_contains(mid, small));
        CHECK(subspace_contains(big, mid));
        CHECK(subspace_contains(big, small));  // transitivity endpoint
        CHECK(subspace_equal(mid, mid));
        const bool eq = subspace_equal(mid, big);
        CHECK(eq == (subspace_contains(mid, big) && subspace_contains(big, mid)));
    }
}

TEST_CASE("trivial subspace flows through the algebra") {
    const Subspace zero = Subspace::zero(3);
    const Subspace e1 = image_basis(Matrix::Identity(3, 3).col(0));
    CHECK(subspace_contains(e1, zero));
    CHECK(subspace_sum(zero, e1).dim() == 1);
    CHECK(subspace_intersect(zero, e1).dim() == 0);
    CHECK(zero.projector().norm() == 0.0);
}
