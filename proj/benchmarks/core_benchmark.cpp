#include "cgcare/geometry.hpp"
#include "cgcare/lqcontrol.hpp"
#include "cgcare/matlin.hpp"
#include "cgcare/riccati.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cgcare;

namespace {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) M(i, j) = dist(rng);
    }
    return M;
}

/// Well-conditioned regular problem of the given size.
ProblemData regular_problem(Index n, Index m, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ProblemData sigma;
    sigma.A = gaussian(rng, n, n, 0.5);
    sigma.A -= (sigma.A.eigenvalues().real().maxCoeff() + 0.5) * Matrix::Identity(n, n);
    sigma.B = gaussian(rng, n, m);
    const Matrix L = gaussian(rng, m, m, 0.5);
    sigma.R = symmetrized(L * L.transpose()) + Matrix::Identity(m, m);
    sigma.S = gaussian(rng, n, m, 0.2);
    const Matrix W = gaussian(rng, n, n, 0.5);
    sigma.Q = symmetrized(W * W.transpose()) + Matrix::Identity(n, n) +
              symmetrized(sigma.S * sigma.R.llt().solve(sigma.S.transpose()));
    return sigma;
}

/// Singular-R problem: the regular core above plus one weightless channel
/// driving one cost-free state.
ProblemData singular_problem(Index n1, Index m1, uint64_t seed) {
    std::mt19937_64 rng(seed);
    const ProblemData core = regular_problem(n1, m1, seed);
    const Index n = n1 + 1, m = m1 + 1;
    ProblemData sigma;
    sigma.A = Matrix::Zero(n, n);
    sigma.A.topLeftCorner(n1, n1) = core.A;
    sigma.A(n1, n1) = -1.0;
    sigma.B = Matrix::Zero(n, m);
    sigma.B.topLeftCorner(n1, m1) = core.B;
    sigma.B(n1, m1) = 1.0;
    sigma.Q = Matrix::Zero(n, n);
    sigma.Q.topLeftCorner(n1, n1) = core.Q;
    sigma.S = Matrix::Zero(n, m);
    sigma.S.topLeftCorner(n1, m1) = core.S;
    sigma.R = Matrix::Zero(m, m);
    sigma.R.topLeftCorner(m1, m1) = core.R;
    return sigma;
}

void BM_PseudoInverse(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const Index n = state.range(0);
    const Matrix M = gaussian(rng, n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pseudo_inverse(M));
    }
}
BENCHMARK(BM_PseudoInverse)->Arg(4)->Arg(8)->Arg(16);

void BM_GcareResidual(benchmark::State& state) {
    const Index n = state.range(0);
    const ProblemData sigma = regular_problem(n, 2, 11);
    std::mt19937_64 rng(13);
    const Matrix X = symmetrized(gaussian(rng, n, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcare_residual(sigma, X));
    }
}
BENCHMARK(BM_GcareResidual)->Arg(4)->Arg(12);

void BM_GrdeForward(benchmark::State& state) {
    const ProblemData sigma = singular_problem(state.range(0), 2, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grde_forward(sigma, 5.0, GridSpec{51}));
    }
}
BENCHMARK(BM_GrdeForward)->Arg(3)->Arg(6);

void BM_CareLimit(benchmark::State& state) {
    const ProblemData sigma = regular_problem(state.range(0), 2, 19);
    for (auto _ : state) {
        benchmark::DoNotOptimize(care_limit_solution(sigma));
    }
}
BENCHMARK(BM_CareLimit)->Arg(3)->Arg(6);

void BM_RegularOracle(benchmark::State& state) {
    const ProblemData sigma = regular_problem(state.range(0), 2, 23);
    for (auto _ : state) {
        benchmark::DoNotOptimize(regular_care_oracle(sigma));
    }
}
BENCHMARK(BM_RegularOracle)->Arg(3)->Arg(6)->Arg(12);

void BM_GeometryReport(benchmark::State& state) {
    const ProblemData sigma = singular_problem(state.range(0), 2, 29);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geometry_report(sigma));
    }
}
BENCHMARK(BM_GeometryReport)->Arg(3)->Arg(6);

void BM_SimulateClosedLoop(benchmark::State& state) {
    const Index n = state.range(0);
    const ProblemData sigma = regular_problem(n, 2, 31);
    const LimitResult limit = care_limit_solution(sigma);
    ControlLaw law;
    law.kind = ControlLaw::Kind::constant;
    law.constant_gain = pseudo_inverse(sigma.R) *
                        (sigma.S.transpose() + sigma.B.transpose() * limit.Xbar);
    law.projector = kernel_projector(sigma.R);
    const Vector x0 = Vector::Ones(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_closed_loop(sigma, law, x0, 10.0, GridSpec{101}));
    }
}
BENCHMARK(BM_SimulateClosedLoop)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
