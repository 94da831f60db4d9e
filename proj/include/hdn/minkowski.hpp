#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string_view>

namespace hdn {

/// Real four-component vector on Minkowski space. Fields such as P_mu, S_mu,
/// W_mu and wave covectors k_mu are stored covariantly (index down); events
/// x^mu are stored contravariantly.
template <typename Scalar>
using FourVector = Eigen::Matrix<Scalar, 4, 1>;

using FourVectord = FourVector<double>;

enum class CausalClass { Timelike, Spacelike, Null };

enum class PlaneClass { SpacelikePlane, LorentzianPlane, DegeneratePlane };

inline constexpr double kDefaultClassTol = 1e-9;

/// Metric eta = diag(+1, -1, -1, -1).
template <typename Scalar>
Eigen::DiagonalMatrix<Scalar, 4> metric()
{
    return Eigen::DiagonalMatrix<Scalar, 4>(Scalar(1), Scalar(-1), Scalar(-1), Scalar(-1));
}

/// a_0 b_0 - a_1 b_1 - a_2 b_2 - a_3 b_3.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedA, 4)
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedB, 4)
    return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
}

/// Raise (or lower) the index; the metric is its own inverse.
template <typename Derived>
FourVector<typename Derived::Scalar> raise(const Eigen::MatrixBase<Derived>& v)
{
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 4)
    return metric<typename Derived::Scalar>() * v;
}

/// Component-square sum, the reference scale for relative tolerances.
template <typename Derived>
typename Derived::Scalar square_sum(const Eigen::MatrixBase<Derived>& v)
{
    return v.squaredNorm();
}

/// Signed quadratic form normalised by the component-square sum; lies in
/// [-1, 1]. The zero vector has margin 0.
template <typename Derived>
typename Derived::Scalar causal_margin(const Eigen::MatrixBase<Derived>& v)
{
    using Scalar = typename Derived::Scalar;
    const Scalar scale = square_sum(v);
    return scale > Scalar(0) ? inner(v, v) / scale : Scalar(0);
}

template <typename Derived>
CausalClass causal_class(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar tol = kDefaultClassTol)
{
    using std::abs;
    const auto q = inner(v, v);
    const auto threshold = tol * square_sum(v);
    if (abs(q) <= threshold)
        return CausalClass::Null;
    return q > 0 ? CausalClass::Timelike : CausalClass::Spacelike;
}

/// Gram matrix [[a.a, a.b], [a.b, b.b]] of the Minkowski form restricted to
/// span(a, b).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, 2, 2> gram(const Eigen::MatrixBase<DerivedA>& a,
                                                    const Eigen::MatrixBase<DerivedB>& b)
{
    Eigen::Matrix<typename DerivedA::Scalar, 2, 2> g;
    const auto ab = inner(a, b);
    g << inner(a, a), ab, ab, inner(b, b);
    return g;
}

/// det G / (|a|^2 |b|^2). Positive on spacelike planes, negative on
/// Lorentzian ones; bounded by 1 in magnitude.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar plane_margin(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    const Scalar scale = square_sum(a) * square_sum(b);
    return scale > Scalar(0) ? gram(a, b).determinant() / scale : Scalar(0);
}

/// Causal character of the 2-plane spanned by a and b, decided from the sign
/// of the Gram determinant. Linearly dependent or null planes are Degenerate.
template <typename DerivedA, typename DerivedB>
PlaneClass plane_class(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b,
                       typename DerivedA::Scalar tol = kDefaultClassTol)
{
    const auto g = gram(a, b);
    const auto det = g.determinant();
    const auto threshold = tol * square_sum(a) * square_sum(b);
    if (det > threshold && g(0, 0) < 0)
        return PlaneClass::SpacelikePlane;
    if (det < -threshold)
        return PlaneClass::LorentzianPlane;
    return PlaneClass::DegeneratePlane;
}

constexpr std::string_view to_string(CausalClass c)
{
    switch (c) {
    case CausalClass::Timelike: return "Timelike";
    case CausalClass::Spacelike: return "Spacelike";
    case CausalClass::Null: return "Null";
    }
    return "?";
}

constexpr std::string_view to_string(PlaneClass c)
{
    switch (c) {
    case PlaneClass::SpacelikePlane: return "SpacelikePlane";
    case PlaneClass::LorentzianPlane: return "LorentzianPlane";
    case PlaneClass::DegeneratePlane: return "DegeneratePlane";
    }
    return "?";
}

} // namespace hdn
