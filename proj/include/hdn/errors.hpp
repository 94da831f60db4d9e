#pragma once

#include <stdexcept>
#include <string>

namespace hdn {

/// Invalid wave-function configuration. mode_index is -1 when the problem is
/// not attributable to a single mode.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(const std::string& what, int mode_index = -1)
        : std::runtime_error(what), mode_index(mode_index)
    {
    }

    int mode_index;
};

/// |psi| is below the node threshold; the polar decomposition is undefined.
class NodeError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// P.S vanishes relative to |P||S| (or one of P, S is negligible); theta is
/// undefined.
class OrthogonalDegenerateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// theta or e^{+-theta} is not representable in double precision.
class ThetaOverflowError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// W+ and W- were both classified timelike. They are Minkowski-orthogonal, so
/// this can only come from a numerical fault or a tolerance misconfiguration.
class InternalConsistencyError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace hdn
