#pragma once

// Validator for the subset of JSON Schema used by docs/report.schema.json:
// type, enum, pattern, minimum, properties, required, additionalProperties,
// items, prefixItems, minItems, maxItems, anyOf and local $ref.

#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

namespace schema_check {

using nlohmann::json;

class Validator {
 public:
  explicit Validator(json root) : root_(std::move(root)) {}

  /// Empty when doc conforms; otherwise one message per violation.
  std::vector<std::string> validate(const json& doc) const {
    std::vector<std::string> errors;
    check(root_, doc, "$", errors);
    return errors;
  }

  std::vector<std::string> validate(const json& doc, const std::string& def) const {
    std::vector<std::string> errors;
    check(root_["$defs"].at(def), doc, "$", errors);
    return errors;
  }

 private:
  const json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root_["$defs"].at(ref.substr(prefix.size()));
  }

  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    throw std::runtime_error("unsupported type " + t);
  }

  void check(const json& s, const json& v, const std::string& path,
             std::vector<std::string>& errors) const {
    if (s.contains("$ref")) check(resolve(s["$ref"]), v, path, errors);
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t);
      } else {
        ok = has_type(v, s["type"]);
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + s["type"].dump());
        return;
      }
    }
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
    }
    if (s.contains("pattern") && v.is_string() &&
        !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
      errors.push_back(path + ": " + v.dump() + " does not match pattern");
    if (s.contains("minimum") && v.is_number() &&
        v.get<double>() < s["minimum"].get<double>())
      errors.push_back(path + ": below minimum");
    if (s.contains("anyOf")) {
      bool any = false;
      for (const auto& alt : s["anyOf"]) {
        std::vector<std::string> sub;
        check(alt, v, path, sub);
        if (sub.empty()) {
          any = true;
          break;
        }
      }
      if (!any) errors.push_back(path + ": matches no alternative");
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& key : s["required"])
          if (!v.contains(key.get<std::string>()))
            errors.push_back(path + ": missing " + key.get<std::string>());
      for (const auto& [key, value] : v.items()) {
        if (s.contains("properties") && s["properties"].contains(key)) {
          check(s["properties"][key], value, path + "." + key, errors);
        } else if (s.contains("additionalProperties") &&
                   s["additionalProperties"] == false) {
          errors.push_back(path + ": unexpected property " + key);
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
        errors.push_back(path + ": too few items");
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
        errors.push_back(path + ": too many items");
      std::size_t prefix = 0;
      if (s.contains("prefixItems")) {
        prefix = s["prefixItems"].size();
        for (std::size_t i = 0; i < prefix && i < v.size(); ++i)
          check(s["prefixItems"][i], v[i], path + "[" + std::to_string(i) + "]", errors);
      }
      if (s.contains("items"))
        for (std::size_t i = prefix; i < v.size(); ++i)
          check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
    }
  }

  json root_;
};

}  // namespace schema_check
