#include "lgsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lgsim/errors.hpp"

namespace lgsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ": unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(origin + ": empty section name", lineno);
            cfg.sections_[section]; // section may stay empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected key = value", lineno);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ": empty key", lineno);
        if (section.empty())
            throw ConfigError(origin + ": key '" + key + "' outside any [section]", lineno);
        auto& sect = cfg.sections_[section];
        if (sect.count(key))
            throw ConfigError(origin + ": duplicate key '" + key + "' in [" + section + "]",
                              lineno);
        sect[key] = {value, lineno};
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_string(buf.str(), path.string());
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_str(const std::string& section, const std::string& key,
                                std::optional<std::string> fallback) const {
    const auto it = sections_.find(section);
    if (it != sections_.end()) {
        const auto kit = it->second.find(key);
        if (kit != it->second.end()) return kit->second.value;
    }
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) return -1;
    const auto kit = it->second.find(key);
    return kit == it->second.end() ? -1 : kit->second.line;
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        std::optional<int> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    const auto s = get_str(section, key);
    int v = 0;
    const auto rc = std::from_chars(s.data(), s.data() + s.size(), v);
    if (rc.ec != std::errc{} || rc.ptr != s.data() + s.size())
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: '" + s + "'",
                          line_of(section, key));
    return v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              std::optional<double> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    const auto s = get_str(section, key);
    double v = 0.0;
    const auto rc = std::from_chars(s.data(), s.data() + s.size(), v);
    if (rc.ec != std::errc{} || rc.ptr != s.data() + s.size())
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" + s + "'",
                          line_of(section, key));
    return v;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          std::optional<bool> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    const auto s = get_str(section, key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: '" + s + "'",
                      line_of(section, key));
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::optional<std::uint64_t> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    const auto s = get_str(section, key);
    std::uint64_t v = 0;
    const auto rc = std::from_chars(s.data(), s.data() + s.size(), v);
    if (rc.ec != std::errc{} || rc.ptr != s.data() + s.size())
        throw ConfigError(origin_ + ": key '" + key + "' is not an unsigned integer: '" + s + "'",
                          line_of(section, key));
    return v;
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key) const {
    const auto s = get_str(section, key);
    std::vector<double> out;
    std::string cell;
    std::stringstream ss(s);
    while (ss >> cell) {
        if (!cell.empty() && cell.back() == ',') cell.pop_back();
        if (cell.empty()) continue;
        double v = 0.0;
        const auto rc = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (rc.ec != std::errc{} || rc.ptr != cell.data() + cell.size())
            throw ConfigError(origin_ + ": key '" + key + "' has a bad number: '" + cell + "'",
                              line_of(section, key));
        out.push_back(v);
    }
    return out;
}

void ConfigFile::require_known_keys(const std::string& section,
                                    const std::vector<std::string>& allowed) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) return;
    for (const auto& [key, entry] : it->second)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(origin_ + ": unknown key '" + key + "' in [" + section + "]",
                              entry.line);
}

RunConfig resolve_common(const ConfigFile& file, std::uint64_t seed, int workers,
                         const std::filesystem::path& out_dir) {
    RunConfig cfg;
    cfg.file = file;
    cfg.seed = file.get_u64("run", "rng_seed", seed);
    cfg.workers = workers;
    cfg.out_dir = out_dir;

    file.require_known_keys("run", {"rng_seed"});
    file.require_known_keys("grid", {"n_radial", "n_azimuthal", "r_max_factor", "waist"});
    file.require_known_keys("detection", {"method", "beta"});

    cfg.waist = file.get_double("grid", "waist", 1.0);
    if (!(cfg.waist > 0.0))
        throw ConfigError(file.origin() + ": waist must be > 0", file.line_of("grid", "waist"));

    cfg.grid.n_radial = file.get_int("grid", "n_radial", 256);
    cfg.grid_azimuthal_explicit = file.has("grid", "n_azimuthal");
    cfg.grid.n_azimuthal = file.get_int("grid", "n_azimuthal", 8);
    const double r_factor = file.get_double("grid", "r_max_factor", 8.0);
    if (!(r_factor > 0.0))
        throw ConfigError(file.origin() + ": r_max_factor must be > 0",
                          file.line_of("grid", "r_max_factor"));
    cfg.grid.r_max = r_factor * cfg.waist;

    cfg.model.method = parse_method(file.get_str("detection", "method", "if"));
    cfg.model.beta = file.get_double("detection", "beta",
                                     cfg.model.method == Method::IntensityFlattening ? 1.0 : 1.0);
    cfg.model.grid = cfg.grid;
    return cfg;
}

} // namespace lgsim
