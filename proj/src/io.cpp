#include "hdn/io.hpp"

#include "hdn/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace hdn {

using nlohmann::json;

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double number_at(const json& arr, std::size_t i, const std::string& what, int mode)
{
    if (!arr[i].is_number())
        throw ConfigError("mode " + std::to_string(mode) + ": " + what + "[" + std::to_string(i) + "] is not a number",
                          mode);
    return arr[i].get<double>();
}

} // namespace

Superposition superposition_from_json(const json& j, double shell_tol)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    if (!j.contains("mass") || !j["mass"].is_number())
        throw ConfigError("config needs a numeric \"mass\"");
    if (!j.contains("modes") || !j["modes"].is_array())
        throw ConfigError("config needs a \"modes\" array");

    std::vector<PlaneWaveMode> modes;
    int idx = 0;
    for (const auto& m : j["modes"]) {
        const std::string where = "mode " + std::to_string(idx) + ": ";
        if (!m.is_object())
            throw ConfigError(where + "must be an object", idx);
        if (!m.contains("k") || !m["k"].is_array() || m["k"].size() != 4)
            throw ConfigError(where + "\"k\" must be an array of 4 numbers", idx);
        if (!m.contains("c") || !m["c"].is_array() || m["c"].size() != 2)
            throw ConfigError(where + "\"c\" must be [re, im]", idx);
        PlaneWaveMode mode;
        for (std::size_t mu = 0; mu < 4; ++mu)
            mode.k(static_cast<Eigen::Index>(mu)) = number_at(m["k"], mu, "k", idx);
        mode.c = Complex(number_at(m["c"], 0, "c", idx), number_at(m["c"], 1, "c", idx));
        modes.push_back(mode);
        ++idx;
    }
    return Superposition(j["mass"].get<double>(), std::move(modes), shell_tol);
}

json to_json(const Superposition& w)
{
    json modes = json::array();
    for (const auto& m : w.modes())
        modes.push_back({{"k", to_json(m.k)}, {"c", {m.c.real(), m.c.imag()}}});
    return {{"mass", w.mass()}, {"modes", modes}};
}

Superposition load_superposition(const std::string& path, double shell_tol)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return superposition_from_json(j, shell_tol);
}

json to_json(const FourVectord& v)
{
    return json::array({v(0), v(1), v(2), v(3)});
}

json to_json(const Tolerances& tols)
{
    return {{"class_tol", tols.classification}, {"ortho_tol", tols.orthogonality}, {"node_tol", tols.node}};
}

json to_json(const HdnPoint& p)
{
    return {
        {"x", to_json(p.x)},
        {"psi", {p.psi.real(), p.psi.imag()}},
        {"P", to_json(p.P)},
        {"S", to_json(p.S)},
        {"theta", p.theta},
        {"w_plus", to_json(p.w_plus)},
        {"w_minus", to_json(p.w_minus)},
        {"w_plus_sq", inner(p.w_plus, p.w_plus)},
        {"w_minus_sq", inner(p.w_minus, p.w_minus)},
        {"class_plus", to_string(p.class_plus)},
        {"class_minus", to_string(p.class_minus)},
        {"selection", to_string(p.selection)},
        {"plane_class", to_string(p.plane)},
        {"class_margin", p.class_margin},
        {"plane_margin", p.plane_margin},
        {"gram_consistent", p.gram_consistent},
    };
}

json to_json(const FractionEstimate& est)
{
    json counts = json::object();
    json fractions = json::object();
    json wilson = json::object();
    for (int i = 0; i < kVerdictCount; ++i) {
        const auto v = static_cast<Verdict>(i);
        const std::string name(to_string(v));
        counts[name] = est.count(v);
        fractions[name] = est.fraction(v);
        const Interval ci = est.wilson_95(v);
        wilson[name] = {ci.lo, ci.hi};
    }
    return {{"counts", counts}, {"fractions", fractions}, {"wilson_95", wilson}, {"seed", est.seed}, {"n", est.total}};
}

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result)
{
    out << "tau,x0,x1,x2,x3,u0,u1,u2,u3,selection\n";
    for (const auto& p : result.points) {
        out << format_number(p.tau);
        for (int mu = 0; mu < 4; ++mu)
            out << ',' << format_number(p.x(mu));
        for (int mu = 0; mu < 4; ++mu)
            out << ',' << format_number(p.u(mu));
        out << ',' << to_string(p.selection) << '\n';
    }
    out << "# termination: " << to_string(result.termination) << '\n';
}

void write_scan_csv(std::ostream& out, std::span<const ScanCell> cells)
{
    out << "x0,x1,x2,x3,selection,theta,w_plus_sq,w_minus_sq\n";
    for (const auto& c : cells) {
        for (int mu = 0; mu < 4; ++mu)
            out << format_number(c.x(mu)) << ',';
        out << to_string(c.verdict) << ',' << format_number(c.theta) << ',' << format_number(c.w_plus_sq) << ','
            << format_number(c.w_minus_sq) << '\n';
    }
}

} // namespace hdn
