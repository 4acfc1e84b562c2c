#include "fraclayer/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fraclayer/errors.hpp"

namespace fraclayer {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<const char*, const char*>>& default_entries() {
    static const std::vector<std::pair<const char*, const char*>> d = {
        {"measure.atoms", "[[0.5, 1.0]]"},
        {"measure.lap_mass", "0.0"},
        {"potential.kind", "\"pn\""},
        {"potential.coeffs", "[]"},
        {"solver.h", "0.1"},
        {"solver.R_schedule", "[25, 50, 100]"},
        {"solver.delta_schedule", "[0.01, 0.001, 0.0]"},
        {"solver.tol", "1e-6"},
        {"solver.max_iters", "20000"},
        {"solver.step", "0.0"},
        {"operator.s_list", "[0.1, 0.25, 0.5, 0.75, 0.9]"},
        {"operator.n", "256"},
        {"operator.symbol_k", "[1, 2, 4]"},
        {"operator.pn_n", "4096"},
        {"operator.pn_X", "200.0"},
        {"energy.solver_h", "0.25"},
        {"energy.R_schedule", "[64, 128, 256]"},
        {"energy.R_list", "[4, 8, 16, 32, 64, 128]"},
        {"energy.claim_s", "[0.25, 0.5, 0.75]"},
        {"energy.claim_R", "[2, 4, 8, 16, 32, 64, 128, 256]"},
        {"ibp.R", "8.0"},
        {"extend.rows", "200"},
        {"extend.lambda_max", "40.0"},
        {"extend.R_list", "[4, 8, 16, 32]"},
        {"extend.closure_radius", "20.0"},
        {"extend.csv_stride", "5"},
        {"symmetry.X", "6.0"},
        {"symmetry.n", "96"},
        {"symmetry.direction", "[1.0, 2.0]"},
        {"symmetry.init", "\"axis\""},
        {"symmetry.tol", "1e-7"},
        {"symmetry.max_iters", "20000"},
        {"symmetry.profile_h", "0.05"},
        {"symmetry.rows", "100"},
        {"symmetry.R_list", "[1, 2, 4]"},
        {"symmetry.growth_F", "\"log\""},
        {"symmetry.growth_R_list", "[4, 8, 16, 32, 64]"},
        {"symmetry.growth_h", "1.0"},
        {"symmetry.growth_rows", "60"},
        {"seed", "20240601"},
    };
    return d;
}

struct PresetDef {
    const char* name;
    std::vector<std::pair<const char*, const char*>> entries;
};

const std::vector<PresetDef>& presets() {
    static const std::vector<PresetDef> p = {
        {"pn-half", {{"potential.kind", "\"pn\""}, {"measure.atoms", "[[0.5, 1.0]]"}, {"measure.lap_mass", "0.0"}}},
        {"quartic-mix",
         {{"potential.kind", "\"quartic\""}, {"measure.atoms", "[[0.3, 0.5], [0.7, 0.5]]"}, {"measure.lap_mass", "0.0"}}},
        {"quartic-lowS", {{"potential.kind", "\"quartic\""}, {"measure.atoms", "[[0.3, 1.0]]"}, {"measure.lap_mass", "0.0"}}},
        {"quartic-withLap",
         {{"potential.kind", "\"quartic\""}, {"measure.atoms", "[[0.3, 0.4], [0.7, 0.4]]"}, {"measure.lap_mass", "0.2"}}},
        {"quartic-highS",
         {{"potential.kind", "\"quartic\""}, {"measure.atoms", "[[0.75, 1.0]]"}, {"measure.lap_mass", "0.0"}}},
    };
    return p;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

json parse_value(const std::string& key, const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        throw ConfigError("config: value of '" + key + "' is not valid JSON: " + text);
    }
}

std::vector<double> check_positive_list(const Config& c, const std::string& key, double min_value) {
    const std::vector<double> v = c.numbers(key);
    if (v.empty()) throw ConfigError("config: '" + key + "' must not be empty");
    for (double x : v)
        if (!(x >= min_value)) throw ConfigError("config: entries of '" + key + "' must be >= " + std::to_string(min_value));
    return v;
}

}  // namespace

Config Config::defaults() {
    Config c;
    for (const auto& [k, v] : default_entries()) c.entries_[k] = json::parse(v).dump();
    return c;
}

std::vector<std::string> Config::preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.emplace_back(p.name);
    return out;
}

Config Config::preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (name != p.name) continue;
        Config c = defaults();
        for (const auto& [k, v] : p.entries) c.set(k, v);
        return c;
    }
    throw ConfigError("config: unknown preset '" + name + "'");
}

void Config::set(const std::string& key, const std::string& json_value) {
    if (entries_.find(key) == entries_.end()) throw ConfigError("config: unknown key '" + key + "'");
    entries_[key] = parse_value(key, json_value).dump();
}

void Config::merge_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        set(key, value);
    }
}

void Config::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str());
}

std::string Config::dump() const {
    json j = json::object();
    for (const auto& [k, v] : entries_) j[k] = json::parse(v);
    return j.dump(2);
}

double Config::number(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("config: unknown key '" + key + "'");
    const json j = json::parse(it->second);
    if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError("config: '" + key + "' must be finite");
    return v;
}

std::size_t Config::count(const std::string& key) const {
    const double v = number(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ConfigError("config: '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::string Config::text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("config: unknown key '" + key + "'");
    const json j = json::parse(it->second);
    if (!j.is_string()) throw ConfigError("config: '" + key + "' must be a string");
    return j.get<std::string>();
}

std::vector<double> Config::numbers(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("config: unknown key '" + key + "'");
    const json j = json::parse(it->second);
    if (!j.is_array()) throw ConfigError("config: '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError("config: '" + key + "' must be an array of numbers");
        out.push_back(e.get<double>());
        if (!std::isfinite(out.back())) throw ConfigError("config: '" + key + "' must be finite");
    }
    return out;
}

SpectralMeasure Config::measure() const {
    const json j = json::parse(entries_.at("measure.atoms"));
    if (!j.is_array()) throw ConfigError("config: 'measure.atoms' must be a list of [s, weight] pairs");
    std::vector<Atom> atoms;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ConfigError("config: 'measure.atoms' must be a list of [s, weight] pairs");
        atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    for (const Atom& a : atoms)
        if (a.s < 0.05 || a.s > 0.95)
            throw ConfigError("config: domain error, atom s = " + std::to_string(a.s) + " outside [0.05, 0.95]");
    return SpectralMeasure(std::move(atoms), number("measure.lap_mass"));
}

Potential Config::potential() const {
    const std::string kind = text("potential.kind");
    Potential p = Potential::quartic();
    if (kind == "pn") {
        p = Potential::peierls_nabarro();
    } else if (kind == "quartic") {
        p = Potential::quartic();
    } else if (kind == "polynomial") {
        p = Potential::polynomial(numbers("potential.coeffs"));
    } else {
        throw ConfigError("config: potential.kind must be 'pn', 'quartic' or 'polynomial'");
    }
    const PotentialReport rep = validate_potential(p);
    for (const CheckEntry& e : rep.entries)
        if (!e.passed) throw ConfigError("config: potential fails check '" + e.name + "'");
    return p;
}

SolverConfig Config::solver() const {
    SolverConfig s;
    s.h = number("solver.h");
    s.R_schedule = numbers("solver.R_schedule");
    s.delta_schedule = numbers("solver.delta_schedule");
    s.tol = number("solver.tol");
    s.max_iters = count("solver.max_iters");
    s.step = number("solver.step");
    fraclayer::validate(s);
    return s;
}

SolverConfig Config::energy_solver() const {
    SolverConfig s = solver();
    s.h = number("energy.solver_h");
    s.R_schedule = numbers("energy.R_schedule");
    fraclayer::validate(s);
    return s;
}

Solve2DConfig Config::symmetry_solver() const {
    Solve2DConfig c;
    c.X = number("symmetry.X");
    c.n = count("symmetry.n");
    const std::vector<double> d = numbers("symmetry.direction");
    if (d.size() != 2) throw ConfigError("config: 'symmetry.direction' must have two entries");
    c.direction = {d[0], d[1]};
    c.init = text("symmetry.init");
    c.tol = number("symmetry.tol");
    c.max_iters = count("symmetry.max_iters");
    try {
        fraclayer::validate(c);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

void Config::validate() const {
    measure();
    potential();
    const SolverConfig s = solver();
    const SolverConfig es = energy_solver();
    symmetry_solver();

    for (double v : numbers("operator.s_list"))
        if (v < 0.05 || v > 0.95)
            throw ConfigError("config: domain error, operator s = " + std::to_string(v) + " outside [0.05, 0.95]");
    if (numbers("operator.s_list").empty()) throw ConfigError("config: 'operator.s_list' must not be empty");
    const std::size_t on = count("operator.n");
    if (on < 16 || (on & (on - 1)) != 0) throw ConfigError("config: 'operator.n' must be a power of two >= 16");
    check_positive_list(*this, "operator.symbol_k", 1.0);
    if (count("operator.pn_n") < 64) throw ConfigError("config: 'operator.pn_n' must be >= 64");
    if (!(number("operator.pn_X") > 12.0)) throw ConfigError("config: 'operator.pn_X' must exceed 12");

    const double R_energy = es.R_schedule.back();
    for (double R : check_positive_list(*this, "energy.R_list", 2.0))
        if (R > R_energy - 2.0) throw ConfigError("config: energy.R_list exceeds the energy solve radius");
    if (numbers("energy.R_list").size() < 3) throw ConfigError("config: 'energy.R_list' needs at least 3 radii");
    for (double v : numbers("energy.claim_s"))
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("config: 'energy.claim_s' entries must lie in (0, 1)");
    check_positive_list(*this, "energy.claim_R", 2.0);

    const double R_final = s.R_schedule.back();
    const double ibpR = number("ibp.R");
    if (!(ibpR >= 1.0) || ibpR > R_final - 2.0) throw ConfigError("config: 'ibp.R' must lie in [1, R_final - 2]");

    if (count("extend.rows") < 20) throw ConfigError("config: 'extend.rows' must be >= 20");
    const double lmax = number("extend.lambda_max");
    for (double R : check_positive_list(*this, "extend.R_list", 2.0))
        if (R > R_final - 2.0 || R * 1.2 > lmax)
            throw ConfigError("config: extend.R_list must fit in the box and below lambda_max / 1.2");
    const double cr = number("extend.closure_radius");
    if (!(cr > 0.0) || cr > R_final - 2.0) throw ConfigError("config: 'extend.closure_radius' must lie in (0, R_final - 2]");
    if (count("extend.csv_stride") < 1) throw ConfigError("config: 'extend.csv_stride' must be >= 1");

    if (!(number("symmetry.profile_h") > 0.0)) throw ConfigError("config: 'symmetry.profile_h' must be positive");
    if (count("symmetry.rows") < 20) throw ConfigError("config: 'symmetry.rows' must be >= 20");
    const double X2 = number("symmetry.X");
    for (double R : check_positive_list(*this, "symmetry.R_list", 0.5))
        if (R > 0.8 * X2) throw ConfigError("config: symmetry.R_list must stay below 0.8 X");
    growth_from_name(text("symmetry.growth_F"));
    const std::vector<double> gR = check_positive_list(*this, "symmetry.growth_R_list", 2.0);
    const double gh = number("symmetry.growth_h");
    if (!(gh > 0.0)) throw ConfigError("config: 'symmetry.growth_h' must be positive");
    const double gX = *std::max_element(gR.begin(), gR.end()) + 4.0 * gh;
    if (gX * std::sqrt(2.0) > R_final - 2.0)
        throw ConfigError("config: symmetry.growth_R_list needs a larger solver radius");
    if (2.0 * gX / gh + 1.0 > 400.0) throw ConfigError("config: symmetry growth grid exceeds 400^2 nodes");
    if (count("symmetry.growth_rows") < 20) throw ConfigError("config: 'symmetry.growth_rows' must be >= 20");
    count("seed");
}

}  // namespace fraclayer
