#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "oaekit/error.hpp"

// Typed field access that reports the JSON path of the first violation.
namespace oaekit::json_util {

using Json = nlohmann::ordered_json;

inline std::string child(const std::string& path, const std::string& key) {
  return path + "." + key;
}
inline std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

inline const Json& field(const Json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw SchemaViolation(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaViolation(child(path, key) + ": missing required field");
  return *it;
}

inline double number(const Json& obj, const std::string& path, const std::string& key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number()) throw SchemaViolation(child(path, key) + ": expected a number");
  return v.get<double>();
}

inline long long integer(const Json& obj, const std::string& path, const std::string& key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number_integer()) throw SchemaViolation(child(path, key) + ": expected an integer");
  return v.get<long long>();
}

inline std::size_t count(const Json& obj, const std::string& path, const std::string& key) {
  const long long v = integer(obj, path, key);
  if (v < 0) throw SchemaViolation(child(path, key) + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline std::string string(const Json& obj, const std::string& path, const std::string& key) {
  const Json& v = field(obj, path, key);
  if (!v.is_string()) throw SchemaViolation(child(path, key) + ": expected a string");
  return v.get<std::string>();
}

inline const Json& array(const Json& obj, const std::string& path, const std::string& key) {
  const Json& v = field(obj, path, key);
  if (!v.is_array()) throw SchemaViolation(child(path, key) + ": expected an array");
  return v;
}

inline Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaViolation(what + ": $: invalid JSON (" + e.what() + ")");
  }
}

// Serializes with two-space indentation and a trailing newline. Doubles use
// the library's shortest round-trip formatting.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace oaekit::json_util
