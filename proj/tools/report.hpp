#pragma once

// JSON rendering of run reports and CSV export of trajectories for the
// command-line front end. Reports are deterministic for fixed inputs and
// settings once the timestamp is suppressed.

#include "cgcare/geometry.hpp"
#include "cgcare/lqcontrol.hpp"
#include "cgcare/problem.hpp"
#include "cgcare/riccati.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace cgcare::cli {

using Json = nlohmann::ordered_json;

Json matrix_json(const Matrix& M);
Json vector_json(const Vector& v);

Json validation_json(const ValidationReport& report);
Json derived_json(const ProblemData& sigma, const DerivedData& derived, Index reach_dim);
Json geometry_json(const GeometryReport& report);
Json limit_json(const LimitResult& result);
Json candidate_json(const SolutionCandidate& candidate);

std::string timestamp_now();

/// Header "t,x_1..x_n,u_1..u_m,integrand" followed by one row per stamp,
/// written with round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace cgcare::cli
