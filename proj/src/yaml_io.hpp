#pragma once

// Internal YAML helpers shared by the structure and run-config readers.

#include <charconv>
#include <initializer_list>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "sqfd/csv.hpp"
#include "sqfd/errors.hpp"
#include "sqfd/geometry.hpp"

namespace sqfd::detail {

inline int yaml_line(const YAML::Node& node) { return node.Mark().line + 1; }

inline double yaml_number(const YAML::Node& node, std::string_view key) {
    if (!node.IsScalar())
        throw ConfigError("line " + std::to_string(yaml_line(node)) + ": field '" +
                          std::string(key) + "' must be a number");
    const std::string& text = node.Scalar();
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError("line " + std::to_string(yaml_line(node)) + ": field '" +
                          std::string(key) + "' is not a number: '" + text + "'");
    return v;
}

inline int yaml_int(const YAML::Node& node, std::string_view key) {
    double v = yaml_number(node, key);
    if (v != static_cast<int>(v))
        throw ConfigError("line " + std::to_string(yaml_line(node)) + ": field '" +
                          std::string(key) + "' must be an integer");
    return static_cast<int>(v);
}

inline void reject_unknown_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                                std::string_view block) {
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok)
            throw ConfigError("line " + std::to_string(yaml_line(kv.first)) + ": unknown key '" + key +
                              "' in " + std::string(block) + " block");
    }
}

TestStructure structure_from_yaml(const YAML::Node& node);
void structure_to_yaml(YAML::Emitter& out, const TestStructure& s);

} // namespace sqfd::detail
