#pragma once

// Run configuration: INI-style text with named sections.
//
//   [system]  type = hydrogen | ho2d | custom-potential, units = atomic | si,
//             mass (electron masses), charge (e), k, omega, screening
//   [cavity]  g, omega_c, chirality = +1 | -1
//   [state]   hydrogen/custom: n, l, l_z (integer or "all"); ho2d: n_R, n_L;
//             path = numeric | analytic | both; rabi pair: e_* and g_* keys
//   [sweep]   parameter = g | omega_c, start, stop, count, scale = linear | log
//   [oracle]  g_values, omega_c, omega, n_mat, n_ph, gate
//   [rabi]    points, periods, t_max, target_ratio, override_selection
//   [lamb]    omega_min, omega_max (required for non-Coulomb potentials)
//   [output]  format = csv | json, unit = hartree | meV | GHz | cm-1, path
//
// Frequencies are angular (rad per unit time). With units = si, omega_c,
// omega and the lamb cutoffs are in 1/s and rabi times in s.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "../cavity.hpp"
#include "../constants.hpp"
#include "../errors.hpp"
#include "../potential.hpp"

namespace chiralcav::io {

enum class SystemKind { hydrogen, ho2d, custom };
enum class PathMode { numeric, analytic, both };
enum class OutputFormat { csv, json };
enum class SweepScale { linear, log };

struct SweepBlock
{
    std::string parameter = "g";
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    SweepScale scale = SweepScale::linear;

    std::vector<double> values() const
    {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            v[static_cast<std::size_t>(i)] = scale == SweepScale::linear
                                                 ? start + f * (stop - start)
                                                 : start * std::pow(stop / start, f);
        }
        if (count > 1) v.back() = stop;
        return v;
    }
};

struct OracleBlock
{
    std::vector<double> g_values{0.01, 0.02, 0.04};
    double omega_c = 5.0; // in units of omega
    double omega = 1.0;
    int n_mat = 10;
    int n_ph = 8;
    double gate = 0.02;
};

struct RabiBlock
{
    int points = 200;
    double periods = 1.0;        ///< window in units of 2 pi / omega_tilde, unless t_max is set
    std::optional<double> t_max;
    std::optional<double> target_ratio; ///< ho2d only: choose g so |g12|/hbar w~ = target
    bool override_selection = false;
};

struct RunConfig
{
    SystemKind system = SystemKind::hydrogen;
    UnitMode units = UnitMode::atomic;
    double mass = 1.0;    // electron masses
    double charge = -1.0; // elementary charges
    double k = 1.0;       // Coulomb strength, atomic units
    double omega = 1.0;   // oscillator frequency
    double screening = 10.0;

    double g = 0.0;
    double omega_c = 1.0;
    Chirality chirality = Chirality::plus;

    int n = 1;
    int l = 0;
    std::optional<int> l_z = 0; ///< nullopt means every l_z in ascending order
    int n_R = 0;
    int n_L = 0;
    PathMode path = PathMode::analytic;
    QuantumNumbers excited{2, 1, 1};
    QuantumNumbers ground{1, 0, 0};

    std::optional<SweepBlock> sweep;
    OracleBlock oracle;
    RabiBlock rabi;
    std::optional<double> lamb_omega_min;
    std::optional<double> lamb_omega_max;

    OutputFormat format = OutputFormat::csv;
    EnergyUnit unit = EnergyUnit::hartree;
    std::string output_path;

    /// Cavity parameters in atomic units.
    CavityParams cavity() const
    {
        const UnitSystem u{units};
        return CavityParams(g, u.frequency_to_atomic(omega_c), chirality, mass, charge);
    }
    double omega_atomic() const { return UnitSystem{units}.frequency_to_atomic(omega); }
};

namespace detail {

using boost::property_tree::ptree;

[[noreturn]] inline void reject(const std::string& field, const std::string& why)
{
    throw InvalidParameter(field + ": " + why);
}

inline double to_double(const std::string& field, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        reject(field, "expected a number, got '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) reject(field, "expected a finite number, got '" + text + "'");
    return v;
}

inline int to_int(const std::string& field, const std::string& text)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        reject(field, "expected an integer, got '" + text + "'");
    }
    if (used != text.size()) reject(field, "expected an integer, got '" + text + "'");
    return static_cast<int>(v);
}

inline bool to_bool(const std::string& field, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    reject(field, "expected true or false, got '" + text + "'");
}

/// Strips trailing comments and whitespace.
inline std::string clean(std::string s)
{
    for (const char* marker : {";", "#"}) {
        const auto pos = s.find(marker);
        if (pos != std::string::npos) s.erase(pos);
    }
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

struct Reader
{
    const ptree& root;

    std::optional<std::string> get(const std::string& section, const std::string& key) const
    {
        const auto sec = root.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return clean(*v);
    }
    template <class T, class F>
    void read(const std::string& section, const std::string& key, T& out, F convert) const
    {
        if (auto v = get(section, key)) out = convert(section + "." + key, *v);
    }
    void number(const std::string& s, const std::string& k, double& out) const { read(s, k, out, to_double); }
    void integer(const std::string& s, const std::string& k, int& out) const { read(s, k, out, to_int); }
};

inline const std::vector<std::pair<std::string, std::vector<std::string>>>& known_keys()
{
    static const std::vector<std::pair<std::string, std::vector<std::string>>> keys = {
        {"system", {"type", "units", "mass", "charge", "k", "omega", "screening"}},
        {"cavity", {"g", "omega_c", "chirality"}},
        {"state", {"n", "l", "l_z", "n_R", "n_L", "path", "e_n", "e_l", "e_lz", "g_n", "g_l", "g_lz", "e_nR", "e_nL",
                   "g_nR", "g_nL"}},
        {"sweep", {"parameter", "start", "stop", "count", "scale"}},
        {"oracle", {"g_values", "omega_c", "omega", "n_mat", "n_ph", "gate"}},
        {"rabi", {"points", "periods", "t_max", "target_ratio", "override_selection"}},
        {"lamb", {"omega_min", "omega_max"}},
        {"output", {"format", "unit", "path"}},
    };
    return keys;
}

inline void check_known(const ptree& root)
{
    for (const auto& [section, body] : root) {
        const auto& keys = known_keys();
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& p) { return p.first == section; });
        if (it == keys.end()) reject(section, "unknown section");
        for (const auto& [key, value] : body) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                reject(section + "." + key, "unknown key");
        }
    }
}

} // namespace detail

/// Applies the settings in `text` on top of `cfg` and validates the result.
inline RunConfig parse_config(const std::string& text, RunConfig cfg = {})
{
    using namespace detail;
    ptree root;
    try {
        std::istringstream in(text);
        boost::property_tree::ini_parser::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw InvalidParameter("config: line " + std::to_string(e.line()) + ": " + e.message());
    }
    check_known(root);
    const Reader r{root};

    if (auto v = r.get("system", "type")) {
        if (*v == "hydrogen") cfg.system = SystemKind::hydrogen;
        else if (*v == "ho2d") cfg.system = SystemKind::ho2d;
        else if (*v == "custom-potential") cfg.system = SystemKind::custom;
        else reject("system.type", "expected hydrogen, ho2d or custom-potential, got '" + *v + "'");
    }
    if (auto v = r.get("system", "units")) {
        if (*v == "atomic") cfg.units = UnitMode::atomic;
        else if (*v == "si") cfg.units = UnitMode::si;
        else reject("system.units", "expected atomic or si, got '" + *v + "'");
    }
    r.number("system", "mass", cfg.mass);
    r.number("system", "charge", cfg.charge);
    r.number("system", "k", cfg.k);
    r.number("system", "omega", cfg.omega);
    r.number("system", "screening", cfg.screening);

    r.number("cavity", "g", cfg.g);
    r.number("cavity", "omega_c", cfg.omega_c);
    if (auto v = r.get("cavity", "chirality")) {
        if (*v == "+1" || *v == "1" || *v == "plus") cfg.chirality = Chirality::plus;
        else if (*v == "-1" || *v == "minus") cfg.chirality = Chirality::minus;
        else reject("cavity.chirality", "expected +1 or -1, got '" + *v + "'");
    }

    r.integer("state", "n", cfg.n);
    r.integer("state", "l", cfg.l);
    if (auto v = r.get("state", "l_z")) {
        if (*v == "all") cfg.l_z.reset();
        else cfg.l_z = to_int("state.l_z", *v);
    }
    r.integer("state", "n_R", cfg.n_R);
    r.integer("state", "n_L", cfg.n_L);
    if (auto v = r.get("state", "path")) {
        if (*v == "numeric") cfg.path = PathMode::numeric;
        else if (*v == "analytic") cfg.path = PathMode::analytic;
        else if (*v == "both") cfg.path = PathMode::both;
        else reject("state.path", "expected numeric, analytic or both, got '" + *v + "'");
    }
    r.integer("state", "e_n", cfg.excited.n);
    r.integer("state", "e_l", cfg.excited.l);
    r.integer("state", "e_lz", cfg.excited.l_z);
    r.integer("state", "g_n", cfg.ground.n);
    r.integer("state", "g_l", cfg.ground.l);
    r.integer("state", "g_lz", cfg.ground.l_z);
    if (r.get("state", "e_nR") || r.get("state", "e_nL")) {
        int nr = 0, nl = 0;
        r.integer("state", "e_nR", nr);
        r.integer("state", "e_nL", nl);
        if (nr < 0 || nl < 0) reject("state.e_nR", "occupations must be >= 0");
        cfg.excited = ho2d_label(nr, nl);
    }
    if (r.get("state", "g_nR") || r.get("state", "g_nL")) {
        int nr = 0, nl = 0;
        r.integer("state", "g_nR", nr);
        r.integer("state", "g_nL", nl);
        if (nr < 0 || nl < 0) reject("state.g_nR", "occupations must be >= 0");
        cfg.ground = ho2d_label(nr, nl);
    }

    if (root.get_child_optional("sweep")) {
        SweepBlock s = cfg.sweep.value_or(SweepBlock{});
        if (auto v = r.get("sweep", "parameter")) s.parameter = *v;
        r.number("sweep", "start", s.start);
        r.number("sweep", "stop", s.stop);
        r.integer("sweep", "count", s.count);
        if (auto v = r.get("sweep", "scale")) {
            if (*v == "linear") s.scale = SweepScale::linear;
            else if (*v == "log") s.scale = SweepScale::log;
            else reject("sweep.scale", "expected linear or log, got '" + *v + "'");
        }
        cfg.sweep = s;
    }

    if (auto v = r.get("oracle", "g_values")) {
        cfg.oracle.g_values.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.oracle.g_values.push_back(to_double("oracle.g_values", clean(item)));
    }
    r.number("oracle", "omega_c", cfg.oracle.omega_c);
    r.number("oracle", "omega", cfg.oracle.omega);
    r.integer("oracle", "n_mat", cfg.oracle.n_mat);
    r.integer("oracle", "n_ph", cfg.oracle.n_ph);
    r.number("oracle", "gate", cfg.oracle.gate);

    r.integer("rabi", "points", cfg.rabi.points);
    r.number("rabi", "periods", cfg.rabi.periods);
    if (auto v = r.get("rabi", "t_max")) cfg.rabi.t_max = to_double("rabi.t_max", *v);
    if (auto v = r.get("rabi", "target_ratio")) cfg.rabi.target_ratio = to_double("rabi.target_ratio", *v);
    if (auto v = r.get("rabi", "override_selection")) cfg.rabi.override_selection = to_bool("rabi.override_selection", *v);

    if (auto v = r.get("lamb", "omega_min")) cfg.lamb_omega_min = to_double("lamb.omega_min", *v);
    if (auto v = r.get("lamb", "omega_max")) cfg.lamb_omega_max = to_double("lamb.omega_max", *v);

    if (auto v = r.get("output", "format")) {
        if (*v == "csv") cfg.format = OutputFormat::csv;
        else if (*v == "json") cfg.format = OutputFormat::json;
        else reject("output.format", "expected csv or json, got '" + *v + "'");
    }
    if (auto v = r.get("output", "unit")) {
        try {
            cfg.unit = parse_energy_unit(*v);
        } catch (const InvalidParameter& e) {
            reject("output.unit", e.what());
        }
    }
    if (auto v = r.get("output", "path")) cfg.output_path = *v;
    return cfg;
}

/// Field-level checks shared by every command.
inline void validate(const RunConfig& c)
{
    using detail::reject;
    if (!(c.mass > 0.0)) reject("system.mass", "must be > 0");
    if (!(c.k > 0.0)) reject("system.k", "must be > 0");
    if (!(c.omega > 0.0)) reject("system.omega", "must be > 0");
    if (!(c.screening > 0.0)) reject("system.screening", "must be > 0");
    if (!(c.g >= 0.0)) reject("cavity.g", "must be >= 0");
    if (!(c.omega_c > 0.0)) reject("cavity.omega_c", "must be > 0");
    if (c.n_R < 0) reject("state.n_R", "must be >= 0");
    if (c.n_L < 0) reject("state.n_L", "must be >= 0");
    if (c.sweep) {
        const SweepBlock& s = *c.sweep;
        if (s.parameter != "g" && s.parameter != "omega_c")
            reject("sweep.parameter", "expected g or omega_c, got '" + s.parameter + "'");
        if (s.count < 1) reject("sweep.count", "must be >= 1");
        if (s.count > 1 && s.start == s.stop) reject("sweep.stop", "range is empty (start == stop)");
        if (s.scale == SweepScale::log && !(s.start > 0.0 && s.stop > 0.0))
            reject("sweep.start", "log sweeps need positive start and stop");
        if (s.parameter == "g" && (s.start < 0.0 || s.stop < 0.0)) reject("sweep.start", "g must be >= 0");
        if (s.parameter == "omega_c" && !(s.start > 0.0 && s.stop > 0.0))
            reject("sweep.start", "omega_c must be > 0");
    }
    if (c.oracle.g_values.empty()) reject("oracle.g_values", "must list at least one value");
    for (double g : c.oracle.g_values)
        if (!(g >= 0.0)) reject("oracle.g_values", "values must be >= 0");
    if (!(c.oracle.omega_c > 0.0)) reject("oracle.omega_c", "must be > 0");
    if (!(c.oracle.omega > 0.0)) reject("oracle.omega", "must be > 0");
    if (!(c.oracle.gate > 0.0)) reject("oracle.gate", "must be > 0");
    if (c.rabi.points < 2) reject("rabi.points", "must be >= 2");
    if (!(c.rabi.periods > 0.0)) reject("rabi.periods", "must be > 0");
    if (c.rabi.t_max && !(*c.rabi.t_max > 0.0)) reject("rabi.t_max", "must be > 0");
    if (c.rabi.target_ratio && !(*c.rabi.target_ratio > 0.0)) reject("rabi.target_ratio", "must be > 0");
}

/// Built-in scenarios.
inline std::optional<std::string> preset_text(const std::string& name)
{
    if (name == "paper-0.3meV")
        return "[system]\ntype = hydrogen\nunits = si\n"
               "[cavity]\ng = 0.01\nomega_c = 1e16\nchirality = +1\n"
               "[state]\nn = 2\nl = 1\nl_z = 1\npath = analytic\n"
               "[output]\nunit = meV\n";
    if (name == "oracle-default")
        return "[system]\ntype = ho2d\n"
               "[cavity]\nchirality = +1\n"
               "[oracle]\ng_values = 0.01, 0.02, 0.04\nomega_c = 5\nomega = 1\nn_mat = 10\nn_ph = 8\ngate = 0.02\n";
    if (name == "rabi-ho2d")
        return "[system]\ntype = ho2d\nomega = 1\n"
               "[cavity]\ng = 0.002\nomega_c = 2\nchirality = +1\n"
               "[state]\ne_nR = 1\ne_nL = 0\ng_nR = 0\ng_nL = 0\n"
               "[rabi]\npoints = 200\nperiods = 1\ntarget_ratio = 1e-3\n";
    if (name == "lamb-hydrogen")
        return "[system]\ntype = hydrogen\n"
               "[state]\nn = 1\nl = 0\nl_z = 0\n"
               "[output]\nunit = GHz\n";
    return std::nullopt;
}

inline std::vector<std::string> preset_names()
{
    return {"paper-0.3meV", "oracle-default", "rabi-ho2d", "lamb-hydrogen"};
}

} // namespace chiralcav::io
