#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgsim/detection.hpp"
#include "lgsim/quadrature.hpp"

namespace lgsim {

/// Flat sectioned key-value config:
///   [section]
///   key = value      # comment
/// Keys remember their source line for error messages.
class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line = -1;
    };

    static ConfigFile parse_file(const std::filesystem::path& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_str(const std::string& section, const std::string& key,
                        std::optional<std::string> fallback = std::nullopt) const;
    int get_int(const std::string& section, const std::string& key,
                std::optional<int> fallback = std::nullopt) const;
    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const;
    bool get_bool(const std::string& section, const std::string& key,
                  std::optional<bool> fallback = std::nullopt) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::optional<std::uint64_t> fallback = std::nullopt) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    int line_of(const std::string& section, const std::string& key) const;

    /// Throws ConfigError naming the first key of `section` not in `allowed`.
    void require_known_keys(const std::string& section,
                            const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::map<std::string, Entry>>& sections() const {
        return sections_;
    }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string origin_;
};

/// Resolved per-run settings shared by every subcommand.
struct RunConfig {
    ConfigFile file;
    GridSpec grid{};
    DetectionModel model{};
    double waist = 1.0;
    std::uint64_t seed = 1;
    int workers = 1;
    std::filesystem::path out_dir = ".";
    bool grid_azimuthal_explicit = false; // n_azimuthal given, else per family
};

/// Reads [grid] and [detection] (both optional) plus shared waist handling.
/// The model grid r_max resolves to r_max_factor * waist (default 8).
RunConfig resolve_common(const ConfigFile& file, std::uint64_t seed, int workers,
                         const std::filesystem::path& out_dir);

} // namespace lgsim
