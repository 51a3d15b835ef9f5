#include "bathlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace bathlab {

namespace {

using Table = std::vector<std::pair<std::string, std::string>>;

const Table verify_keys{
    {"extent", "6"},
    {"points_per_axis", "10"},
    {"polar_order", "8"},
    {"azimuthal_order", "16"},
    {"kappa", "0.01"},
    {"samples", "8"},
    {"r0_asymmetry", "0"},
    {"tol_detailed_balance", "1e-12"},
    {"tol_bath_stationarity", "1e-13"},
    {"tol_refinement", "1"},
    {"tol_projection", "1e-12"},
    {"tol_conservation", "0.001"},
};

const Table spectrum_keys{
    {"extent", "6"},
    {"points_per_axis", "12"},
    {"kappa", "0.01"},
    {"modes", "0,0,0; 1,0,0; 2,0,0"},
    {"contour_samples", "64"},
    {"ray_length", "20"},
    {"compare_kappa0", "false"},
};

const Table propagator_keys{
    {"extent", "6"},
    {"points_per_axis", "12"},
    {"kappa", "0.01"},
    {"decay_step", "1"},
    {"decay_count", "10"},
    {"decay_projector", "spectral"},
    {"osc_modes", "1,0,0; 2,0,0; 4,0,0; 8,0,0"},
    {"osc_sweep_t", "1"},
    {"envelope_mode", "4,0,0"},
    {"envelope_times", "0.5, 1, 2, 4, 8"},
};

const Table evolve_keys{
    {"extent", "6"},
    {"points_per_axis", "10"},
    {"polar_order", "6"},
    {"azimuthal_order", "12"},
    {"max_mode", "1"},
    {"dealias", "false"},
    {"kappa", "0.01"},
    {"dt", "0.01"},
    {"t_end", "10"},
    {"initial", "perturbed"},
    {"amplitude", "0.05"},
    {"pattern", "1,0,0"},
    {"width", "2"},
    {"conservation_projection", "true"},
    {"output_every", "0.1"},
    {"integrator", "etd2"},
    {"fit_t_min", "2"},
    {"fit_t_max", "-1"},
    {"weight_exponent", "5"},
    {"derivative_order", "8"},
    {"control_diagnostics", "true"},
    {"checkpoint_every", "0"},
    {"restart_from", ""},
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

const std::vector<std::pair<std::string, std::string>>& command_defaults(const std::string& command)
{
    if (command == "verify")
        return verify_keys;
    if (command == "spectrum")
        return spectrum_keys;
    if (command == "propagator")
        return propagator_keys;
    if (command == "evolve")
        return evolve_keys;
    throw ConfigError("unknown command '" + command + "'");
}

RunConfig RunConfig::parse(std::string_view text, const std::string& command)
{
    RunConfig c;
    c.command_ = command;
    for (const auto& [k, v] : command_defaults(command))
        c.values_[k] = v;

    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char ch) {
                return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
            }))
            throw ConfigError("line " + std::to_string(lineno) + ": malformed key '" + key + "'");
        if (!c.values_.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "' for command " + command);
        if (seen[key]++)
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' given twice");
        c.values_[key] = value;
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path, const std::string& command)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), command);
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    if (!values_.count(key))
        throw ConfigError("unknown key '" + key + "' for command " + command_);
    values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ContractViolation("config key '" + key + "' not defined for command " + command_);
    return it->second;
}

namespace {

double to_double(const std::string& key, const std::string& s)
{
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': '" + s + "' is not a number");
    return x;
}

int to_int(const std::string& key, const std::string& s)
{
    int x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
    return x;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

Mode parse_mode(const std::string& key, const std::string& s)
{
    const auto parts = split(s, ',');
    if (parts.size() != 3)
        throw ConfigError("key '" + key + "': mode '" + s + "' needs three integers");
    return {to_int(key, parts[0]), to_int(key, parts[1]), to_int(key, parts[2])};
}

} // namespace

double RunConfig::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

int RunConfig::get_int(const std::string& key) const { return to_int(key, get_string(key)); }

bool RunConfig::get_bool(const std::string& key) const
{
    const std::string s = get_string(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw ConfigError("key '" + key + "': '" + s + "' is not a boolean");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& p : split(get_string(key), ','))
        out.push_back(to_double(key, p));
    return out;
}

std::vector<Mode> RunConfig::get_modes(const std::string& key) const
{
    std::vector<Mode> out;
    for (const auto& p : split(get_string(key), ';'))
        out.push_back(parse_mode(key, p));
    return out;
}

Mode RunConfig::get_mode(const std::string& key) const { return parse_mode(key, get_string(key)); }

std::string RunConfig::resolved_text() const
{
    std::string out;
    for (const auto& [k, v] : values_)
        out += k + " = " + v + "\n";
    return out;
}

} // namespace bathlab
