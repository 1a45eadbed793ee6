#ifndef ATLAS_CONFIG_HPP
#define ATLAS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "atlas/map.hpp"

namespace atlas {

// Flat key = value config (TOML-style scalars only). Flags override file
// values; missing keys fall back to documented defaults.
class Config {
  public:
    Config() = default;
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& dflt = "") const;
    double get_double(const std::string& key, double dflt) const;
    std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    // Builds the map from family/params keys; validates tolerances and caps.
    LiftedMap make_map() const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace atlas

#endif
