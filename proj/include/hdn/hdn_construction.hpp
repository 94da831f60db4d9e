#pragma once

// The Horton-Dewdney-Nesteruk rule: from the polar gradients P_mu, S_mu build
//   sinh(theta) = (P.P - S.S) / (2 P.S),
//   W+ = e^theta P + S,   W- = -e^-theta P + S,
// and take whichever of W+- is timelike as the velocity field. W+ and W- are
// Minkowski-orthogonal, so they are never both timelike, but both are
// spacelike exactly when P and S span a spacelike 2-plane.

#include "hdn/errors.hpp"
#include "hdn/minkowski.hpp"
#include "hdn/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>

namespace hdn {

struct Tolerances
{
    double classification = kDefaultClassTol;
    double orthogonality = 1e-9;
    double node = kDefaultNodeTol;
};

enum class Selection { PlusTimelike, MinusTimelike, BothSpacelike, Boundary, OrthogonalDegenerate };

/// Outcome of looking at one point or one (P, S) pair: a Selection, or one of
/// the reasons the construction could not even be evaluated.
enum class Verdict { PlusTimelike, MinusTimelike, BothSpacelike, Boundary, OrthogonalDegenerate, Node, Overflow };

inline constexpr int kVerdictCount = 7;

constexpr Verdict to_verdict(Selection s)
{
    return static_cast<Verdict>(static_cast<int>(s));
}

std::string_view to_string(Selection s);
std::string_view to_string(Verdict v);

/// True when P.S vanishes relative to |P||S|, or when one of P, S is
/// negligible next to the other (including either being zero).
template <typename DerivedP, typename DerivedS>
bool is_orthogonal_degenerate(const Eigen::MatrixBase<DerivedP>& P,
                              const Eigen::MatrixBase<DerivedS>& S,
                              typename DerivedP::Scalar tol)
{
    using std::abs;
    const auto np = P.stableNorm();
    const auto ns = S.stableNorm();
    if (std::min(np, ns) <= tol * std::max(np, ns))
        return true;
    return abs(inner(P, S)) <= tol * np * ns;
}

/// asinh((P.P - S.S) / (2 P.S)) via the logarithmic form, written with log1p
/// so it stays accurate for small arguments.
template <typename DerivedP, typename DerivedS>
typename DerivedP::Scalar theta(const Eigen::MatrixBase<DerivedP>& P,
                                const Eigen::MatrixBase<DerivedS>& S,
                                typename DerivedP::Scalar ortho_tol)
{
    using Scalar = typename DerivedP::Scalar;
    using std::abs;
    using std::hypot;
    using std::log;
    using std::log1p;
    if (is_orthogonal_degenerate(P, S, ortho_tol))
        throw OrthogonalDegenerateError("P and S are orthogonal or one of them vanishes; theta is undefined");

    const Scalar u = (inner(P, P) - inner(S, S)) / (Scalar(2) * inner(P, S));
    if (!std::isfinite(u))
        throw ThetaOverflowError("sinh(theta) is not representable");
    const Scalar au = abs(u);
    const Scalar magnitude = au < Scalar(1)
                                 ? log1p(au + au * au / (Scalar(1) + hypot(u, Scalar(1))))
                                 : log(au) + log1p(hypot(Scalar(1), Scalar(1) / au));
    if (magnitude >= std::log(std::numeric_limits<Scalar>::max()))
        throw ThetaOverflowError("e^|theta| is not representable");
    return u < 0 ? -magnitude : magnitude;
}

/// (e^th P + S, -e^-th P + S).
template <typename DerivedP, typename DerivedS>
std::pair<FourVector<typename DerivedP::Scalar>, FourVector<typename DerivedP::Scalar>>
w_fields(const Eigen::MatrixBase<DerivedP>& P, const Eigen::MatrixBase<DerivedS>& S, typename DerivedP::Scalar th)
{
    using std::exp;
    const auto grow = exp(th);
    const auto shrink = exp(-th);
    if (!std::isfinite(th) || !std::isfinite(grow) || !std::isfinite(shrink))
        throw ThetaOverflowError("e^theta overflows for theta = " + std::to_string(static_cast<double>(th)));
    return {(grow * P + S).eval(), (-shrink * P + S).eval()};
}

/// Throws InternalConsistencyError on (Timelike, Timelike).
Selection select(CausalClass plus, CausalClass minus);

/// Everything the construction yields for one (P, S) pair.
struct PairAnalysis
{
    double theta;
    FourVectord w_plus;
    FourVectord w_minus;
    CausalClass class_plus;
    CausalClass class_minus;
    Selection selection;
    PlaneClass plane;
    /// min(|W+.W+| / |W+|^2, |W-.W-| / |W-|^2).
    double class_margin;
    /// det G(P, S) / (|P|^2 |S|^2).
    double plane_margin;
    /// BothSpacelike <-> SpacelikePlane, Plus/MinusTimelike <-> LorentzianPlane,
    /// Boundary <-> DegeneratePlane.
    bool gram_consistent;
};

/// Throws OrthogonalDegenerateError, ThetaOverflowError or
/// InternalConsistencyError.
PairAnalysis analyze_pair(const FourVectord& P, const FourVectord& S, const Tolerances& tols = {});

/// The full pipeline at one space-time event.
struct HdnPoint
{
    FourVectord x;
    Complex psi;
    FourVectord P;
    FourVectord S;
    double theta;
    FourVectord w_plus;
    FourVectord w_minus;
    CausalClass class_plus;
    CausalClass class_minus;
    Selection selection;
    PlaneClass plane;
    double class_margin;
    double plane_margin;
    bool gram_consistent;
};

/// Throws NodeError, OrthogonalDegenerateError, ThetaOverflowError or
/// InternalConsistencyError.
HdnPoint analyze_point(const Superposition& w, const FourVectord& x, const Tolerances& tols = {});

/// Non-throwing variant of analyze_pair: degenerate outcomes become verdicts.
/// InternalConsistencyError still propagates.
struct PairAssessment
{
    Verdict verdict;
    std::optional<PairAnalysis> analysis;
};

PairAssessment assess_pair(const FourVectord& P, const FourVectord& S, const Tolerances& tols = {});

/// Non-throwing variant of analyze_point. For OrthogonalDegenerate and
/// Overflow the gradients are still reported.
struct PointAssessment
{
    Verdict verdict;
    std::optional<PolarGradients> gradients;
    std::optional<HdnPoint> point;
};

PointAssessment assess_point(const Superposition& w, const FourVectord& x, const Tolerances& tols = {});

} // namespace hdn
