#pragma once

#include "hdn/measure.hpp"
#include "hdn/trajectory.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>

namespace hdn {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double v);

/// { "mass": m, "modes": [ { "k": [k0,k1,k2,k3], "c": [re,im] }, ... ] }.
/// Throws ConfigError naming the offending mode.
Superposition superposition_from_json(const nlohmann::json& j, double shell_tol = kDefaultShellTol);
nlohmann::json to_json(const Superposition& w);

/// Reads and validates a superposition file.
Superposition load_superposition(const std::string& path, double shell_tol = kDefaultShellTol);

nlohmann::json to_json(const FourVectord& v);
nlohmann::json to_json(const Tolerances& tols);
nlohmann::json to_json(const HdnPoint& p);

/// counts, fractions and wilson_95 keyed by verdict name, plus seed and n.
nlohmann::json to_json(const FractionEstimate& est);

/// Header tau,x0,x1,x2,x3,u0,u1,u2,u3,selection then one row per point and a
/// final "# termination: <cause>" line.
void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result);

/// Header x0,x1,x2,x3,selection,theta,w_plus_sq,w_minus_sq.
void write_scan_csv(std::ostream& out, std::span<const ScanCell> cells);

} // namespace hdn
