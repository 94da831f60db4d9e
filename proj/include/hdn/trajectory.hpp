#pragma once

#include "hdn/hdn_construction.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdn {

/// No unique timelike W exists at the requested point.
class IllDefinedVelocity : public std::runtime_error
{
public:
    IllDefinedVelocity(Verdict verdict, const FourVectord& x);

    Verdict verdict;
    FourVectord x;
};

/// Unit future-pointing tangent built from the timelike one of W+-.
struct Velocity
{
    FourVectord u;     // contravariant, u.u = 1, u^0 > 0
    FourVectord w;     // the selected W_mu, covariant, unnormalised
    Selection selection;
};

/// Throws IllDefinedVelocity for every verdict other than PlusTimelike and
/// MinusTimelike (including nodes and theta overflow).
Velocity velocity(const Superposition& w, const FourVectord& x, const Tolerances& tols = {});

enum class Termination {
    MaxSteps,
    EnteredBothSpacelike,
    EnteredOrthogonalDegenerate,
    EnteredBoundary,
    HitNode,
    Overflow,
};

std::string_view to_string(Termination t);

struct TrajectoryConfig
{
    double step = 0.01;  // proper-time step, units 1/m
    int max_steps = 1000;
    Tolerances tols;
};

struct TrajectoryPoint
{
    double tau;
    FourVectord x;
    FourVectord u;
    FourVectord w;
    Selection selection;
};

struct TrajectoryResult
{
    std::vector<TrajectoryPoint> points;
    Termination termination = Termination::MaxSteps;
    /// Stage point of the rejected step and its verdict, when the run ended
    /// early.
    std::optional<FourVectord> failed_point;
    std::optional<Verdict> failed_verdict;
    std::vector<std::string> warnings;
};

/// Fixed-step classical RK4 on dx/dtau = u(x). A step is rejected as a whole
/// when any stage point (or the new point) has no well-defined velocity; the
/// last accepted point is then the final record.
///
/// Throws std::invalid_argument for step <= 0 or max_steps < 1 and
/// IllDefinedVelocity when x0 itself is degenerate.
TrajectoryResult integrate(const Superposition& w, const FourVectord& x0, const TrajectoryConfig& cfg);

} // namespace hdn
