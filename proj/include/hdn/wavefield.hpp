#pragma once

#include "hdn/minkowski.hpp"

#include <complex>
#include <span>
#include <vector>

namespace hdn {

using Complex = std::complex<double>;
using ComplexFourVector = Eigen::Matrix<Complex, 4, 1>;

inline constexpr double kDefaultShellTol = 1e-12;
inline constexpr double kDefaultNodeTol = 1e-12;

/// One positive-energy plane wave c * exp(i k_mu x^mu).
struct PlaneWaveMode
{
    FourVectord k;
    Complex c;
};

/// Mode on the mass shell with the given spatial wave vector; k_0 is derived.
PlaneWaveMode on_shell_mode(double mass, double k1, double k2, double k3, Complex c);

/// psi(x) = sum_i c_i exp(i k^(i)_mu x^mu), a finite superposition of
/// positive-energy solutions of -box psi = m^2 psi. Immutable once built.
class Superposition
{
public:
    /// Throws ConfigError naming the offending mode if any mode is off-shell
    /// (|k.k - m^2| > shell_tol * m^2), has k_0 <= 0, a zero amplitude, or a
    /// non-finite component.
    Superposition(double mass, std::vector<PlaneWaveMode> modes, double shell_tol = kDefaultShellTol);

    double mass() const { return mass_; }
    std::span<const PlaneWaveMode> modes() const { return modes_; }

    /// sum_i |c_i|, the largest value |psi| can take.
    double amplitude_bound() const { return amplitude_bound_; }

private:
    double mass_;
    std::vector<PlaneWaveMode> modes_;
    double amplitude_bound_;
};

/// psi(x), x contravariant.
Complex evaluate(const Superposition& w, const FourVectord& x);

/// d_mu psi(x) = sum_i i c_i k^(i)_mu exp(i k^(i).x), covariant.
ComplexFourVector gradient(const Superposition& w, const FourVectord& x);

/// box psi = d^mu d_mu psi, evaluated mode by mode.
Complex dalembertian(const Superposition& w, const FourVectord& x);

/// psi = exp(P + iS) at one point off the nodal set.
struct PolarGradients
{
    Complex psi;
    FourVectord P;
    FourVectord S;
};

/// P_mu + i S_mu = d_mu psi / psi. Throws NodeError when
/// |psi| <= node_tol * amplitude_bound().
PolarGradients polar_gradients(const Superposition& w, const FourVectord& x, double node_tol = kDefaultNodeTol);

/// Three-mode positive-energy superposition whose P_mu and S_mu at the origin
/// span a spacelike 2-plane: k1 = (m,0,0,0), k2 = (sqrt27 m, sqrt26 m, 0, 0),
/// k3 = (sqrt27 m, 0, sqrt26 m, 0); c = (3, -1/sqrt3 - i, i).
Superposition paper_counterexample(double mass = 1.0);

} // namespace hdn
