#ifndef ATLAS_SCHEMA_HPP
#define ATLAS_SCHEMA_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace atlas {

// Minimal JSON-schema checker covering the subset the shipped schemas use:
// type, properties, required, items, enum. Returns human-readable problems;
// empty means valid.
std::vector<std::string> schema_validate(const nlohmann::json& schema,
                                         const nlohmann::json& value,
                                         const std::string& path = "$");

}  // namespace atlas

#endif
