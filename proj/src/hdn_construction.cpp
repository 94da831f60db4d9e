#include "hdn/hdn_construction.hpp"

#include <cmath>

namespace hdn {

std::string_view to_string(Selection s)
{
    return to_string(to_verdict(s));
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::PlusTimelike: return "PlusTimelike";
    case Verdict::MinusTimelike: return "MinusTimelike";
    case Verdict::BothSpacelike: return "BothSpacelike";
    case Verdict::Boundary: return "Boundary";
    case Verdict::OrthogonalDegenerate: return "OrthogonalDegenerate";
    case Verdict::Node: return "Node";
    case Verdict::Overflow: return "Overflow";
    }
    return "?";
}

Selection select(CausalClass plus, CausalClass minus)
{
    using enum CausalClass;
    if (plus == Timelike && minus == Timelike)
        throw InternalConsistencyError("W+ and W- both classified timelike although they are orthogonal");
    if (plus == Null || minus == Null)
        return Selection::Boundary;
    if (plus == Timelike)
        return Selection::PlusTimelike;
    if (minus == Timelike)
        return Selection::MinusTimelike;
    return Selection::BothSpacelike;
}

namespace {

bool gram_agrees(Selection s, PlaneClass plane)
{
    switch (s) {
    case Selection::BothSpacelike: return plane == PlaneClass::SpacelikePlane;
    case Selection::PlusTimelike:
    case Selection::MinusTimelike: return plane == PlaneClass::LorentzianPlane;
    case Selection::Boundary: return plane == PlaneClass::DegeneratePlane;
    case Selection::OrthogonalDegenerate: return false;
    }
    return false;
}

HdnPoint make_point(const FourVectord& x, const PolarGradients& g, const PairAnalysis& a)
{
    return HdnPoint{x,
                    g.psi,
                    g.P,
                    g.S,
                    a.theta,
                    a.w_plus,
                    a.w_minus,
                    a.class_plus,
                    a.class_minus,
                    a.selection,
                    a.plane,
                    a.class_margin,
                    a.plane_margin,
                    a.gram_consistent};
}

} // namespace

PairAnalysis analyze_pair(const FourVectord& P, const FourVectord& S, const Tolerances& tols)
{
    PairAnalysis a{};
    a.theta = theta(P, S, tols.orthogonality);
    std::tie(a.w_plus, a.w_minus) = w_fields(P, S, a.theta);
    a.class_plus = causal_class(a.w_plus, tols.classification);
    a.class_minus = causal_class(a.w_minus, tols.classification);
    a.selection = select(a.class_plus, a.class_minus);
    a.plane = plane_class(P, S, tols.classification);
    a.class_margin = std::min(std::abs(causal_margin(a.w_plus)), std::abs(causal_margin(a.w_minus)));
    a.plane_margin = plane_margin(P, S);
    a.gram_consistent = gram_agrees(a.selection, a.plane);
    return a;
}

HdnPoint analyze_point(const Superposition& w, const FourVectord& x, const Tolerances& tols)
{
    const PolarGradients g = polar_gradients(w, x, tols.node);
    const PairAnalysis a = analyze_pair(g.P, g.S, tols);
    return make_point(x, g, a);
}

PairAssessment assess_pair(const FourVectord& P, const FourVectord& S, const Tolerances& tols)
{
    try {
        PairAnalysis a = analyze_pair(P, S, tols);
        return {to_verdict(a.selection), a};
    } catch (const OrthogonalDegenerateError&) {
        return {Verdict::OrthogonalDegenerate, std::nullopt};
    } catch (const ThetaOverflowError&) {
        return {Verdict::Overflow, std::nullopt};
    }
}

PointAssessment assess_point(const Superposition& w, const FourVectord& x, const Tolerances& tols)
{
    PolarGradients g;
    try {
        g = polar_gradients(w, x, tols.node);
    } catch (const NodeError&) {
        return {Verdict::Node, std::nullopt, std::nullopt};
    }
    const PairAssessment pa = assess_pair(g.P, g.S, tols);
    if (!pa.analysis)
        return {pa.verdict, g, std::nullopt};
    const PairAnalysis& a = *pa.analysis;
    return {pa.verdict,
            g,
            make_point(x, g, a)};
}

} // namespace hdn
