#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "mmfd/harness.hpp"

namespace mmfd::tools {

/// Reads a flat JSON object whose keys mirror RunConfig. "dt" may be a
/// number or the string "coupled".
inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidConfig("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "example") {
      c.example = parse_example(value.get<std::string>());
    } else if (key == "omega") {
      c.omega = value.get<double>();
    } else if (key == "m") {
      c.m = value.get<int>();
    } else if (key == "J_max") {
      c.j_max = value.get<std::size_t>();
    } else if (key == "K_max") {
      c.k_max = value.get<std::size_t>();
    } else if (key == "dt") {
      if (value.is_string()) {
        if (value.get<std::string>() != "coupled") throw InvalidConfig("config: bad dt rule");
        c.dt.reset();
      } else {
        c.dt = value.get<double>();
      }
    } else if (key == "bc") {
      c.bc = parse_bc_strategy(value.get<std::string>());
    } else if (key == "scheme") {
      c.scheme = parse_scheme(value.get<std::string>());
    } else if (key == "T") {
      c.final_time = value.get<double>();
    } else if (key == "method") {
      const auto s = value.get<std::string>();
      if (s == "collocation") {
        c.method = TimeMethod::collocation;
      } else if (s == "backward-euler") {
        c.method = TimeMethod::backward_euler;
      } else {
        throw InvalidConfig("config: unknown method '" + s + "'");
      }
    } else if (key == "homogeneous") {
      c.homogeneous = value.get<bool>();
    } else if (key == "output") {
      c.output = value.get<std::string>();
    } else {
      throw InvalidConfig("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config '" + path + "'");
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig("config '" + path + "': " + e.what());
  }
}

}  // namespace mmfd::tools
