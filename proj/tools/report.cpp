#include "report.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <ostream>

namespace cgcare::cli {

namespace {

std::string number_text(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

}  // namespace

Json matrix_json(const Matrix& M) {
    Json rows = Json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json validation_json(const ValidationReport& report) {
    return Json{{"passed", report.passed()},
                {"pi_psd", report.pi_psd},
                {"pi_min_eigenvalue", report.pi_min_eigenvalue},
                {"q_symmetry_defect", report.q_symmetry_defect},
                {"r_symmetry_defect", report.r_symmetry_defect},
                {"kernel_inclusion_ok", report.kernel_inclusion_ok},
                {"kernel_inclusion_defect", report.kernel_inclusion_defect}};
}

Json derived_json(const ProblemData& sigma, const DerivedData& derived, Index reach_dim) {
    return Json{{"n", sigma.n()},
                {"m", sigma.m()},
                {"rank_R", derived.rank_R},
                {"rank_Pi", derived.rank_Pi},
                {"dim_ker_R", sigma.m() - derived.rank_R},
                {"dim_reach_F_B2", reach_dim}};
}

Json geometry_json(const GeometryReport& report) {
    return Json{{"dim_Vstar", report.Vstar.dim()},
                {"dim_Sstar", report.Sstar.dim()},
                {"dim_Rstar", report.Rstar.dim()},
                {"dim_reach_F_B2", report.reach_F_B2.dim()},
                {"identity_SR", report.identity_SR},
                {"crosscheck_R", report.crosscheck_R}};
}

Json limit_json(const LimitResult& result) {
    return Json{{"converged", result.converged},
                {"time", result.time},
                {"accepted_steps", result.accepted_steps},
                {"residual_norm", result.residual_norm},
                {"growth_rate", result.growth_rate},
                {"Xbar", matrix_json(result.Xbar)}};
}

Json candidate_json(const SolutionCandidate& candidate) {
    return Json{{"is_solution", candidate.is_solution},
                {"gcare_residual_norm", candidate.gcare_residual_norm},
                {"kernel_defect", candidate.kernel_defect},
                {"xb2_defect", candidate.xb2_defect},
                {"ker_x_in_ker_lambda", candidate.ker_x_in_ker_lambda},
                {"x_reach_defect", candidate.x_reach_defect},
                {"lambda_reach_defect", candidate.lambda_reach_defect}};
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const Index n = traj.states.empty() ? 0 : traj.states.front().size();
    const Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
    out << "t";
    for (Index i = 1; i <= n; ++i) out << ",x_" << i;
    for (Index i = 1; i <= m; ++i) out << ",u_" << i;
    out << ",integrand\n";
    for (size_t k = 0; k < traj.grid.size(); ++k) {
        out << number_text(traj.grid[k]);
        for (Index i = 0; i < n; ++i) out << ',' << number_text(traj.states[k](i));
        for (Index i = 0; i < m; ++i) out << ',' << number_text(traj.inputs[k](i));
        out << ',' << number_text(traj.integrand[k]) << '\n';
    }
}

}  // namespace cgcare::cli
