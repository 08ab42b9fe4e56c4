#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "medea/errors.hpp"

namespace medea::detail {

using njson = nlohmann::ordered_json;

inline njson parse_json(const std::string& text, const std::string& what) {
  try {
    return njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const njson& require(const njson& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(ctx + ": missing field '" + key + "'");
  return *it;
}

inline std::string require_string(const njson& j, const char* key, const std::string& ctx) {
  const njson& v = require(j, key, ctx);
  if (!v.is_string()) throw ParseError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t require_int(const njson& j, const char* key, const std::string& ctx) {
  const njson& v = require(j, key, ctx);
  if (!v.is_number_integer())
    throw ParseError(ctx + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline double require_number(const njson& j, const char* key, const std::string& ctx) {
  const njson& v = require(j, key, ctx);
  if (!v.is_number()) throw ParseError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline const njson& require_array(const njson& j, const char* key, const std::string& ctx) {
  const njson& v = require(j, key, ctx);
  if (!v.is_array()) throw ParseError(ctx + ": field '" + key + "' must be an array");
  return v;
}

}  // namespace medea::detail
