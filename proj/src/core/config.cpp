#include "core/config.hpp"

#include <array>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "core/error.hpp"
#include "core/materials_data.hpp"

namespace ocs {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::InvalidArgument, fmt::format("{}: {}", path, what));
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto colon = msg.rfind(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    fail(ErrorCode::Parse, fmt::format("line {}, column {}: {}", line, column, msg));
  }
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "." + key, "missing");
  if (!it->is_number()) field_error(path + "." + key, "must be a number");
  return it->get<double>();
}

double number_field_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? number_field(obj, key, path) : fallback;
}

std::string string_field_or(const json& obj, const std::string& key, const std::string& path,
                            std::string fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) field_error(path + "." + key, "must be a string");
  return it->get<std::string>();
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "must be an object");
}

ComplexIndex checked_index(double n, double k, const std::string& path) {
  if (!(n > 0.0)) field_error(path + ".n", fmt::format("must be > 0 (got {})", n));
  if (!(k >= 0.0)) field_error(path + ".k", fmt::format("must be >= 0 (got {})", k));
  return ComplexIndex{n, k};
}

ComplexIndex lookup(const MaterialTable& materials, const std::string& name, const std::string& path) {
  const auto it = materials.find(name);
  if (it == materials.end()) field_error(path, fmt::format("unknown material '{}'", name));
  return it->second;
}

// An index given inline ({"n":..,"k":..}), by material ({"material":"MgO"}),
// or as a bare material name.
ComplexIndex parse_index_ref(const json& j, const MaterialTable& materials, const std::string& path) {
  if (j.is_string()) return lookup(materials, j.get<std::string>(), path);
  expect_object(j, path);
  if (j.contains("material")) {
    if (j.contains("n")) field_error(path, "give either 'material' or 'n'/'k', not both");
    return lookup(materials, string_field_or(j, "material", path, ""), path + ".material");
  }
  return checked_index(number_field(j, "n", path), number_field_or(j, "k", path, 0.0), path);
}

void merge_materials(const json& table, MaterialTable& out, const std::string& path) {
  expect_object(table, path);
  // Plain entries first so k_fit substrates can refer to them.
  std::vector<std::pair<std::string, const json*>> fits;
  for (const auto& [name, entry] : table.items()) {
    const auto where = path + "." + name;
    expect_object(entry, where);
    const double n = number_field(entry, "n", where);
    if (entry.contains("k_fit")) {
      if (entry.contains("k")) field_error(where, "give either 'k' or 'k_fit', not both");
      out[name] = checked_index(n, 0.0, where);
      fits.emplace_back(name, &entry);
    } else {
      out[name] = checked_index(n, number_field_or(entry, "k", where, 0.0), where);
    }
  }
  for (const auto& [name, entry] : fits) {
    const auto where = path + "." + name + ".k_fit";
    const json& fit = entry->at("k_fit");
    expect_object(fit, where);
    const double target = number_field(fit, "target_absorptance", where);
    const double thickness = number_field(fit, "film_thickness_nm", where);
    const double wavelength = number_field_or(fit, "wavelength_nm", where, 1550.0);
    const ComplexIndex substrate =
        fit.contains("substrate") ? parse_index_ref(fit.at("substrate"), out, where + ".substrate")
                                  : ComplexIndex{1.7, 0.0};
    try {
      out[name] = fit_extinction(out[name], thickness, substrate, target, wavelength);
    } catch (const Error& e) {
      fail(e.code(), fmt::format("{}: {}", where, e.what()));
    }
  }
}

StackSpec parse_stack(const json& j, const MaterialTable& materials, const std::string& path) {
  expect_object(j, path);
  StackSpec spec;
  spec.stack.incident = j.contains("incident") ? parse_index_ref(j.at("incident"), materials, path + ".incident")
                                               : ComplexIndex{1.0, 0.0};
  spec.stack.exit = j.contains("exit") ? parse_index_ref(j.at("exit"), materials, path + ".exit")
                                       : ComplexIndex{1.0, 0.0};
  if (spec.stack.incident.k != 0.0) field_error(path + ".incident.k", "incident medium must be lossless (k = 0)");
  if (!j.contains("layers") || !j.at("layers").is_array()) field_error(path + ".layers", "must be an array");
  const json& layers = j.at("layers");
  if (layers.empty()) field_error(path + ".layers", "must contain at least one layer");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto where = fmt::format("{}.layers[{}]", path, i);
    const json& l = layers[i];
    expect_object(l, where);
    Layer layer;
    layer.label = string_field_or(l, "label", where, fmt::format("layer{}", i));
    layer.thickness_nm = number_field(l, "thickness_nm", where);
    if (!(layer.thickness_nm > 0.0)) {
      field_error(where + ".thickness_nm", fmt::format("must be > 0 (got {})", layer.thickness_nm));
    }
    if (l.contains("material") || l.contains("n")) {
      layer.index = parse_index_ref(l, materials, where);
    } else {
      layer.index = lookup(materials, layer.label, where + ".label");
    }
    spec.stack.layers.push_back(std::move(layer));
  }
  spec.nanowire_label = string_field_or(j, "nanowire_label", path, "");
  spec.cavity_label = string_field_or(j, "cavity_label", path, "");
  spec.ar_label = string_field_or(j, "ar_label", path, "");
  for (const auto* tag : {&spec.nanowire_label, &spec.cavity_label, &spec.ar_label}) {
    if (tag->empty()) continue;
    try {
      spec.stack.find_layer(*tag);
    } catch (const Error& e) {
      field_error(path, e.what());
    }
  }
  return spec;
}

ApertureKind parse_aperture_kind(const std::string& s, const std::string& path) {
  if (s == "paper_disk") return ApertureKind::PaperDisk;
  if (s == "disk") return ApertureKind::Disk;
  if (s == "square") return ApertureKind::Square;
  field_error(path, fmt::format("unknown aperture kind '{}' (paper_disk|disk|square)", s));
}

BeamGeometry parse_beam(const json& j, const std::string& path) {
  expect_object(j, path);
  BeamGeometry g;
  g.wavelength_um = number_field_or(j, "wavelength_um", path, g.wavelength_um);
  g.mfd_um = number_field_or(j, "mfd_um", path, g.mfd_um);
  g.l_air_um = number_field_or(j, "l_air_um", path, g.l_air_um);
  g.l_sub_um = number_field_or(j, "l_sub_um", path, g.l_sub_um);
  g.n_sub = number_field_or(j, "n_sub", path, g.n_sub);
  if (j.contains("aperture")) {
    const json& a = j.at("aperture");
    expect_object(a, path + ".aperture");
    g.aperture.kind = parse_aperture_kind(string_field_or(a, "kind", path + ".aperture", "paper_disk"),
                                          path + ".aperture.kind");
    g.aperture.size_um = number_field_or(a, "size_um", path + ".aperture", g.aperture.size_um);
  }
  const auto conv = string_field_or(j, "path_convention", path, "optical");
  if (conv == "optical") {
    g.path = PathConvention::Optical;
  } else if (conv == "reduced") {
    g.path = PathConvention::Reduced;
  } else {
    field_error(path + ".path_convention", fmt::format("unknown convention '{}' (optical|reduced)", conv));
  }
  try {
    validate(g);
  } catch (const Error& e) {
    field_error(path, e.what());
  }
  return g;
}

json index_json(const ComplexIndex& i) { return json{{"n", i.n}, {"k", i.k}}; }

json stack_json(const StackSpec& s) {
  json layers = json::array();
  for (const auto& l : s.stack.layers) {
    layers.push_back({{"label", l.label}, {"thickness_nm", l.thickness_nm}, {"n", l.index.n}, {"k", l.index.k}});
  }
  return json{{"incident", index_json(s.stack.incident)}, {"exit", index_json(s.stack.exit)},
              {"layers", layers}, {"nanowire_label", s.nanowire_label}, {"cavity_label", s.cavity_label},
              {"ar_label", s.ar_label}};
}

std::string_view aperture_name(ApertureKind k) {
  switch (k) {
    case ApertureKind::PaperDisk: return "paper_disk";
    case ApertureKind::Disk: return "disk";
    case ApertureKind::Square: return "square";
  }
  return "unknown";
}

}  // namespace

std::string_view shipped_materials_json() { return detail::kShippedMaterialsJson; }

MaterialTable parse_material_table(std::string_view json_text) {
  const json doc = parse_json(json_text);
  expect_object(doc, "materials file");
  if (!doc.contains("materials")) field_error("materials file", "missing 'materials' table");
  MaterialTable table;
  merge_materials(doc.at("materials"), table, "materials");
  return table;
}

StackSpec parse_stack_description(std::string_view json_text, const MaterialTable& materials) {
  return parse_stack(parse_json(json_text), materials, "stack");
}

RunConfig parse_run_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  expect_object(doc, "config");

  RunConfig cfg;
  cfg.materials = parse_material_table(shipped_materials_json());
  if (doc.contains("material_defaults")) merge_materials(doc.at("material_defaults"), cfg.materials, "material_defaults");

  if (doc.contains("layers")) {
    cfg.stack = parse_stack(doc, cfg.materials, "stack");
  } else if (doc.contains("stack")) {
    cfg.stack = parse_stack(doc.at("stack"), cfg.materials, "stack");
  }
  if (doc.contains("ar_stack")) cfg.ar_stack = parse_stack(doc.at("ar_stack"), cfg.materials, "ar_stack");
  if (doc.contains("beam")) cfg.beam = parse_beam(doc.at("beam"), "beam");
  if (doc.contains("fiber_index")) {
    cfg.fiber_index = number_field(doc, "fiber_index", "config");
    if (!(cfg.fiber_index > 0.0)) field_error("config.fiber_index", "must be > 0");
  } else if (const auto it = cfg.materials.find("fiber"); it != cfg.materials.end()) {
    cfg.fiber_index = it->second.n;
  }
  cfg.output_path = string_field_or(doc, "output_path", "config", "");
  return cfg;
}

std::string RunConfig::resolved_json() const {
  json j;
  json mats = json::object();
  for (const auto& [name, index] : materials) mats[name] = index_json(index);
  j["materials"] = mats;
  j["stack"] = stack ? stack_json(*stack) : json(nullptr);
  j["ar_stack"] = ar_stack ? stack_json(*ar_stack) : json(nullptr);
  j["beam"] = json{{"wavelength_um", beam.wavelength_um},
                   {"mfd_um", beam.mfd_um},
                   {"l_air_um", beam.l_air_um},
                   {"l_sub_um", beam.l_sub_um},
                   {"n_sub", beam.n_sub},
                   {"aperture", {{"kind", aperture_name(beam.aperture.kind)}, {"size_um", beam.aperture.size_um}}},
                   {"path_convention", beam.path == PathConvention::Optical ? "optical" : "reduced"}};
  j["fiber_index"] = fiber_index;
  j["output_path"] = output_path;
  return j.dump();
}

std::string RunConfig::digest() const { return sha256_hex(resolved_json()); }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::Io, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace ocs
