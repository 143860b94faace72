#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aad {

/// Flat `key = value` settings. `#` starts a comment; blank lines are
/// ignored. Later assignments overwrite earlier ones, which is how
/// command-line overrides are layered on a file.
class Config
{
public:
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return _values.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return _values; }

    // Typed accessors; a present but unparsable value throws
    // Error(invalid_config).
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

    /// Throws Error(invalid_config) naming the first key not in `known`.
    void check_known(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> _values;
};

} // namespace aad
