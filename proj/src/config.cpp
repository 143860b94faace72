#include "aad/config.hpp"

#include "aad/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace aad {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected)
{
    fail(ErrorCode::invalid_config, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

} // namespace

Config Config::parse(const std::string& text, const std::string& origin)
{
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::invalid_config, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(ErrorCode::invalid_config, origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.set(key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) fail(ErrorCode::io_error, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value)
{
    _values[key] = value;
}

std::optional<std::string> Config::get(const std::string& key) const
{
    const auto it = _values.find(key);
    if (it == _values.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const
{
    const auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used != v->size()) bad_value(key, *v, "a number");
        return d;
    } catch (const std::logic_error&) {
        bad_value(key, *v, "a number");
    }
}

long long Config::get_int(const std::string& key, long long fallback) const
{
    const auto v = get(key);
    if (!v) return fallback;
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, *v, "an integer");
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    bad_value(key, *v, "a boolean");
}

std::vector<std::string> Config::get_list(const std::string& key, const std::vector<std::string>& fallback) const
{
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<std::string> out;
    std::istringstream is(*v);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void Config::check_known(const std::vector<std::string>& known) const
{
    for (const auto& [key, value] : _values) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            fail(ErrorCode::invalid_config, "unknown config key '" + key + "'");
        }
    }
}

} // namespace aad
