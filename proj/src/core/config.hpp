#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "core/beam_coupling.hpp"
#include "core/stack_optics.hpp"

namespace ocs {

using MaterialTable = std::map<std::string, ComplexIndex>;

struct StackSpec {
  Stack stack;
  std::string nanowire_label;  // optional tags used by design commands
  std::string cavity_label;
  std::string ar_label;
};

/// Fully resolved run inputs: material names replaced by indices, fitted
/// extinction coefficients computed, beam defaults filled in.
struct RunConfig {
  MaterialTable materials;
  std::optional<StackSpec> stack;
  std::optional<StackSpec> ar_stack;
  BeamGeometry beam;
  double fiber_index = 1.45;
  std::string output_path;

  /// Canonical JSON of every resolved value (sorted keys).
  std::string resolved_json() const;
  /// SHA-256 (hex) of resolved_json(); independent of key order in the source.
  std::string digest() const;
};

/// The material table compiled in from data/materials.json.
std::string_view shipped_materials_json();
MaterialTable parse_material_table(std::string_view json_text);

/// Parses a run config, or a bare stack description (a document whose top
/// level has "layers"). Malformed JSON raises Parse with line and column;
/// bad fields raise InvalidArgument naming the field path.
RunConfig parse_run_config(std::string_view json_text);

/// Parses the stack description format on its own.
StackSpec parse_stack_description(std::string_view json_text, const MaterialTable& materials);

std::string sha256_hex(std::string_view data);

}  // namespace ocs
