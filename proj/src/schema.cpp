#include "atlas/schema.hpp"

namespace atlas {

using nlohmann::json;

namespace {

bool type_matches(const std::string& type, const json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "number") return v.is_number();
    if (type == "integer") return v.is_number_integer();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
}

}  // namespace

std::vector<std::string> schema_validate(const json& schema, const json& value,
                                         const std::string& path) {
    std::vector<std::string> problems;

    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(t.get<std::string>(), value);
        else if (t.is_array())
            for (const auto& alt : t)
                if (type_matches(alt.get<std::string>(), value)) ok = true;
        if (!ok) {
            problems.push_back(path + ": expected type " + t.dump() + ", got " +
                               std::string(value.type_name()));
            return problems;
        }
    }

    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& alt : schema["enum"])
            if (alt == value) ok = true;
        if (!ok) problems.push_back(path + ": value " + value.dump() + " not in enum");
    }

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& req : schema["required"])
                if (!value.contains(req.get<std::string>()))
                    problems.push_back(path + ": missing required key '" +
                                       req.get<std::string>() + "'");
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (value.contains(it.key())) {
                    auto sub = schema_validate(it.value(), value[it.key()],
                                               path + "." + it.key());
                    problems.insert(problems.end(), sub.begin(), sub.end());
                }
    }

    if (value.is_array() && schema.contains("items")) {
        for (size_t i = 0; i < value.size(); ++i) {
            auto sub = schema_validate(schema["items"], value[i],
                                       path + "[" + std::to_string(i) + "]");
            problems.insert(problems.end(), sub.begin(), sub.end());
        }
    }

    return problems;
}

}  // namespace atlas
