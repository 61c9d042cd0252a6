#pragma once

// Strict-schema helpers shared by descriptor parsing and the experiment config.

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "vex/common.hpp"

namespace vex::detail {

using json = nlohmann::json;

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw config_error(path + " must be an object");
}

/// Reject unknown keys and enforce required ones. `path` names the offending
/// location in diagnostics.
inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
    require_object(j, path);
    for (const char* k : required) {
        if (!j.contains(k)) throw config_error(path + ": missing required field '" + k + "'");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required)
            if (it.key() == k) { known = true; break; }
        if (!known)
            for (const char* k : optional)
                if (it.key() == k) { known = true; break; }
        if (!known) throw config_error(path + ": unknown field '" + it.key() + "'");
    }
}

inline double get_number(const json& j, const std::string& path, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw config_error(path + "." + key + " must be a number");
    return v.get<double>();
}

inline int get_int(const json& j, const std::string& path, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw config_error(path + "." + key + " must be an integer");
    return v.get<int>();
}

inline std::string get_string(const json& j, const std::string& path, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw config_error(path + "." + key + " must be a string");
    return v.get<std::string>();
}

}  // namespace vex::detail
