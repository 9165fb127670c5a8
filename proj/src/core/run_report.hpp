#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ocs {

/// What a CLI invocation consumed and produced. The digest covers the command,
/// the resolved config and every resolved flag value, and nothing else.
class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void set_config_json(std::string resolved_config_json) { config_json_ = std::move(resolved_config_json); }
  void add_input(std::string key, std::string value);
  void add_input(std::string key, double value);
  void add_output(std::string path) { outputs_.push_back(std::move(path)); }
  void add_warning(std::string text) { warnings_.push_back(std::move(text)); }

  const std::string& command() const noexcept { return command_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::string inputs_digest() const;
  std::string to_json() const;

 private:
  std::string canonical_inputs() const;

  std::string command_;
  std::string config_json_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
};

}  // namespace ocs
