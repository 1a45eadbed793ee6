#include "atlas/config.hpp"

#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"

namespace atlas {

namespace {
std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot read " + path);
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == '[') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: missing '=' at " + path + ":" + std::to_string(lineno));
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
            val = val.substr(1, val.size() - 2);
        c.values_[key] = val;
    }
    return c;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }
bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ParseError("config: key '" + key + "' is not a number: " + it->second);
    }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
        // Accept scientific notation for caps like 1e7.
        double v = std::stod(it->second);
        return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
        throw ParseError("config: key '" + key + "' is not an integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    return it->second == "true" || it->second == "1" || it->second == "yes";
}

LiftedMap Config::make_map() const {
    std::string family = get_string("family", "standard");
    if (family == "standard") return LiftedMap::standard(get_double("params.k", 1.0));
    if (family == "nontwist")
        return LiftedMap::nontwist(get_double("params.a", 0.5), get_double("params.b", 0.05));
    if (family == "user") {
        std::map<std::string, double> params;
        for (const auto& [k, v] : values_)
            if (k.rfind("params.", 0) == 0) params[k.substr(7)] = get_double(k, 0.0);
        std::string fx = get_string("map.fx"), fy = get_string("map.fy");
        if (fx.empty() || fy.empty())
            throw ParseError("config: user family needs map.fx and map.fy");
        return LiftedMap::user(fx, fy, params);
    }
    throw ParseError("config: unknown family '" + family + "'");
}

}  // namespace atlas
