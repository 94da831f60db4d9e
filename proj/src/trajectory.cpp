#include "hdn/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace hdn {

IllDefinedVelocity::IllDefinedVelocity(Verdict verdict, const FourVectord& x)
    : std::runtime_error("no unique timelike W at x = (" + std::to_string(x(0)) + ", " + std::to_string(x(1)) + ", " +
                         std::to_string(x(2)) + ", " + std::to_string(x(3)) + "): " + std::string(to_string(verdict))),
      verdict(verdict),
      x(x)
{
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::EnteredBothSpacelike: return "EnteredBothSpacelike";
    case Termination::EnteredOrthogonalDegenerate: return "EnteredOrthogonalDegenerate";
    case Termination::EnteredBoundary: return "EnteredBoundary";
    case Termination::HitNode: return "HitNode";
    case Termination::Overflow: return "Overflow";
    }
    return "?";
}

Velocity velocity(const Superposition& w, const FourVectord& x, const Tolerances& tols)
{
    const PointAssessment a = assess_point(w, x, tols);
    if (a.verdict != Verdict::PlusTimelike && a.verdict != Verdict::MinusTimelike)
        throw IllDefinedVelocity(a.verdict, x);

    const HdnPoint& p = *a.point;
    const FourVectord& selected = p.selection == Selection::PlusTimelike ? p.w_plus : p.w_minus;
    FourVectord u = raise(selected) / std::sqrt(inner(selected, selected));
    if (u(0) < 0.0)
        u = -u;
    return {u, selected, p.selection};
}

namespace {

Termination termination_for(Verdict v)
{
    switch (v) {
    case Verdict::BothSpacelike: return Termination::EnteredBothSpacelike;
    case Verdict::OrthogonalDegenerate: return Termination::EnteredOrthogonalDegenerate;
    case Verdict::Boundary: return Termination::EnteredBoundary;
    case Verdict::Node: return Termination::HitNode;
    case Verdict::Overflow: return Termination::Overflow;
    case Verdict::PlusTimelike:
    case Verdict::MinusTimelike: break;
    }
    throw std::logic_error("timelike verdict cannot terminate a trajectory");
}

} // namespace

TrajectoryResult integrate(const Superposition& w, const FourVectord& x0, const TrajectoryConfig& cfg)
{
    if (!(cfg.step > 0.0) || !std::isfinite(cfg.step))
        throw std::invalid_argument("trajectory step must be positive and finite");
    if (cfg.max_steps < 1)
        throw std::invalid_argument("max_steps must be at least 1");

    TrajectoryResult result;
    if (cfg.step * w.mass() > 1.0)
        result.warnings.push_back("step * m = " + std::to_string(cfg.step * w.mass()) +
                                  " exceeds 1; RK4 accuracy will be poor");

    const double h = cfg.step;
    Velocity v = velocity(w, x0, cfg.tols);
    FourVectord x = x0;
    double tau = 0.0;
    result.points.reserve(static_cast<std::size_t>(cfg.max_steps) + 1);
    result.points.push_back({tau, x, v.u, v.w, v.selection});

    for (int n = 0; n < cfg.max_steps; ++n) {
        try {
            const FourVectord k1 = v.u;
            const FourVectord k2 = velocity(w, x + 0.5 * h * k1, cfg.tols).u;
            const FourVectord k3 = velocity(w, x + 0.5 * h * k2, cfg.tols).u;
            const FourVectord k4 = velocity(w, x + h * k3, cfg.tols).u;
            const FourVectord next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v = velocity(w, next, cfg.tols);
            x = next;
        } catch (const IllDefinedVelocity& e) {
            result.termination = termination_for(e.verdict);
            result.failed_point = e.x;
            result.failed_verdict = e.verdict;
            return result;
        }
        tau = static_cast<double>(n + 1) * h;
        result.points.push_back({tau, x, v.u, v.w, v.selection});
    }
    result.termination = Termination::MaxSteps;
    return result;
}

} // namespace hdn
