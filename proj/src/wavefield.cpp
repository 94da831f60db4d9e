#include "hdn/wavefield.hpp"

#include "hdn/errors.hpp"

#include <cmath>
#include <string>

namespace hdn {

namespace {

Complex phase(const FourVectord& k, const FourVectord& x)
{
    // k_mu x^mu: covector paired with a contravariant event, no metric.
    return std::polar(1.0, k.dot(x));
}

} // namespace

PlaneWaveMode on_shell_mode(double mass, double k1, double k2, double k3, Complex c)
{
    const double k0 = std::sqrt(mass * mass + k1 * k1 + k2 * k2 + k3 * k3);
    return {FourVectord(k0, k1, k2, k3), c};
}

Superposition::Superposition(double mass, std::vector<PlaneWaveMode> modes, double shell_tol)
    : mass_(mass), modes_(std::move(modes)), amplitude_bound_(0.0)
{
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ConfigError("mass must be positive and finite, got " + std::to_string(mass));
    if (modes_.empty())
        throw ConfigError("superposition needs at least one mode");

    const double m2 = mass * mass;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        const auto& mode = modes_[i];
        const int idx = static_cast<int>(i);
        const std::string where = "mode " + std::to_string(i) + ": ";
        if (!mode.k.allFinite() || !std::isfinite(mode.c.real()) || !std::isfinite(mode.c.imag()))
            throw ConfigError(where + "non-finite component", idx);
        if (!(mode.k(0) > 0.0))
            throw ConfigError(where + "k0 must be positive (positive energy), got " + std::to_string(mode.k(0)), idx);
        const double residual = std::abs(inner(mode.k, mode.k) - m2);
        if (residual > shell_tol * m2)
            throw ConfigError(where + "off mass shell, |k.k - m^2| = " + std::to_string(residual), idx);
        if (mode.c == Complex(0.0, 0.0))
            throw ConfigError(where + "zero amplitude", idx);
        amplitude_bound_ += std::abs(mode.c);
    }
}

Complex evaluate(const Superposition& w, const FourVectord& x)
{
    Complex psi(0.0, 0.0);
    for (const auto& mode : w.modes())
        psi += mode.c * phase(mode.k, x);
    return psi;
}

ComplexFourVector gradient(const Superposition& w, const FourVectord& x)
{
    const Complex I(0.0, 1.0);
    ComplexFourVector grad = ComplexFourVector::Zero();
    for (const auto& mode : w.modes())
        grad += (I * mode.c * phase(mode.k, x)) * mode.k.cast<Complex>();
    return grad;
}

Complex dalembertian(const Superposition& w, const FourVectord& x)
{
    // d^mu d_mu exp(i k.x) = -(k.k) exp(i k.x)
    Complex box(0.0, 0.0);
    for (const auto& mode : w.modes())
        box += -inner(mode.k, mode.k) * mode.c * phase(mode.k, x);
    return box;
}

PolarGradients polar_gradients(const Superposition& w, const FourVectord& x, double node_tol)
{
    const Complex psi = evaluate(w, x);
    if (std::abs(psi) <= node_tol * w.amplitude_bound())
        throw NodeError("|psi| = " + std::to_string(std::abs(psi)) + " is within the node threshold");
    const ComplexFourVector log_grad = gradient(w, x) / psi;
    return {psi, log_grad.real(), log_grad.imag()};
}

Superposition paper_counterexample(double mass)
{
    const double s26 = std::sqrt(26.0) * mass;
    const double s27 = std::sqrt(27.0) * mass;
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    std::vector<PlaneWaveMode> modes{
        {FourVectord(mass, 0.0, 0.0, 0.0), Complex(3.0, 0.0)},
        {FourVectord(s27, s26, 0.0, 0.0), Complex(-inv_sqrt3, -1.0)},
        {FourVectord(s27, 0.0, s26, 0.0), Complex(0.0, 1.0)},
    };
    return Superposition(mass, std::move(modes));
}

} // namespace hdn
