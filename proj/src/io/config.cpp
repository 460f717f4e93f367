#include "kpplab/io/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "kpplab/errors.hpp"

namespace kpplab::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as real");
    }
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        cfg.set(section.empty() ? key : section + "." + key, val);
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
    const auto it = entries_.find(key);
    return (it == entries_.end()) ? dflt : it->second;
}

double Config::get_double(const std::string& key, double dflt) const {
    const auto it = entries_.find(key);
    return (it == entries_.end()) ? dflt : to_double(key, it->second);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t dflt) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return dflt;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + it->second +
                          "' as integer");
    }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + it->second +
                      "' as bool");
}

std::string Config::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

double Config::require_double(const std::string& key) const {
    return to_double(key, require(key));
}

std::string Config::hash() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : entries_) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Potential potential_from_config(const Config& cfg) {
    if (cfg.has("potential.spec"))
        return parse_potential_arg(cfg.require("potential.spec"));
    const std::string kind = cfg.require("potential.kind");
    if (kind == "constant") return Potential::constant(cfg.require_double("potential.c0"));
    if (kind == "periodic") {
        std::vector<double> vals;
        for (const auto& tok : split(cfg.require("potential.values"), ','))
            vals.push_back(to_double("potential.values", tok));
        return Potential::periodic(vals);
    }
    if (kind == "quasiperiodic") {
        const auto dim = static_cast<int>(cfg.get_int("potential.dim", 1));
        const double mean = cfg.get_double("potential.c0", 0.0);
        Torus alpha{}, phase{};
        const auto atoks = split(cfg.require("potential.alpha"), ',');
        const auto ptoks = split(cfg.get_string("potential.phase", ""), ',');
        for (int i = 0; i < dim; ++i) {
            if (i < static_cast<int>(atoks.size()))
                alpha[i] = to_double("potential.alpha", atoks[i]);
            if (i < static_cast<int>(ptoks.size()) && !ptoks[i].empty())
                phase[i] = to_double("potential.phase", ptoks[i]);
        }
        // coeffs = k1 .. kd : re [: im] ; separated by semicolons
        std::vector<QpMode> modes;
        for (const auto& entry : split(cfg.require("potential.coeffs"), ';')) {
            if (entry.empty()) continue;
            const auto parts = split(entry, ':');
            if (parts.size() < 2)
                throw ConfigError("potential.coeffs entry '" + entry +
                                  "' must look like k1,..,kd:re[:im]");
            const auto ks = split(parts[0], ',');
            QpMode m;
            for (int i = 0; i < dim && i < static_cast<int>(ks.size()); ++i)
                m.k[i] = static_cast<int>(std::stoll(ks[i]));
            const double re = to_double("potential.coeffs", parts[1]);
            const double im =
                (parts.size() > 2) ? to_double("potential.coeffs", parts[2]) : 0.0;
            m.coeff = {re, im};
            modes.push_back(m);
        }
        return Potential::quasiperiodic(dim, mean, modes, alpha, phase);
    }
    throw ConfigError("unknown potential.kind '" + kind + "'");
}

Potential parse_potential_arg(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("potential spec '" + spec +
                          "' must look like kind:args");
    const std::string kind = spec.substr(0, colon);
    const auto args = split(spec.substr(colon + 1), ',');
    if (kind == "constant") {
        if (args.size() != 1) throw ConfigError("constant:<c0>");
        return Potential::constant(to_double("potential", args[0]));
    }
    if (kind == "periodic") {
        std::vector<double> vals;
        for (const auto& a : args) vals.push_back(to_double("potential", a));
        return Potential::periodic(vals);
    }
    if (kind == "amo") {
        if (args.size() < 2 || args.size() > 4)
            throw ConfigError("amo:<kappa>,<C>[,<alpha>[,<phase>]]");
        const double kappa = to_double("potential", args[0]);
        const double c = to_double("potential", args[1]);
        const double alpha =
            (args.size() > 2) ? to_double("potential", args[2]) : kGoldenMean;
        const double phase =
            (args.size() > 3) ? to_double("potential", args[3]) : 0.0;
        return Potential::amo(kappa, c, alpha, phase);
    }
    throw ConfigError("unknown potential kind '" + kind + "'");
}

}  // namespace kpplab::io
