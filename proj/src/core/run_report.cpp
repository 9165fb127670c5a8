#include "core/run_report.hpp"

#include <json.hpp>

#include "core/config.hpp"
#include <fmt/format.h>

namespace ocs {

using nlohmann::json;

void RunReport::add_input(std::string key, std::string value) {
  inputs_.emplace_back(std::move(key), std::move(value));
}

void RunReport::add_input(std::string key, double value) {
  inputs_.emplace_back(std::move(key), fmt::format("{:.17g}", value));
}

std::string RunReport::canonical_inputs() const {
  json inputs = json::object();
  for (const auto& [k, v] : inputs_) inputs[k] = v;
  json doc{{"command", command_}, {"inputs", inputs}};
  doc["config"] = config_json_.empty() ? json(nullptr) : json::parse(config_json_);
  return doc.dump();
}

std::string RunReport::inputs_digest() const { return sha256_hex(canonical_inputs()); }

std::string RunReport::to_json() const {
  json doc{{"command", command_}, {"inputs_digest", inputs_digest()}, {"outputs", outputs_},
           {"warnings", warnings_}};
  return doc.dump(2) + "\n";
}

}  // namespace ocs
