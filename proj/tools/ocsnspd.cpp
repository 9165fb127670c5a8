// ocsnspd: command-line front end over libocsnspd.
//
// Every subcommand computes all of its outputs in memory first, checks that
// each destination is writable, and only then writes files. Result records go
// to stdout as single-line key=value pairs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ocsnspd/ocsnspd.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kAnalysis = 3, kIo = 4 };

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(ocs_status s) {
  switch (s) {
    case OCS_OK: return kOk;
    case OCS_ERR_NO_FRINGE:
    case OCS_ERR_INSUFFICIENT_DATA: return kAnalysis;
    case OCS_ERR_IO: return kIo;
    case OCS_ERR_INTERNAL: return kInternal;
    default: return kValidation;
  }
}

void check(ocs_status s) {
  if (s != OCS_OK) {
    throw Failure{exit_code_for(s), std::string(ocs_status_name(s)) + ": " + ocs_last_error_message()};
  }
}

[[noreturn]] void invalid(const std::string& msg) { throw Failure{kValidation, "invalid-argument: " + msg}; }

std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Values with spaces, quotes or '=' are double-quoted so a record stays splittable on spaces.
std::string quoted(const std::string& v) {
  if (!v.empty() && v.find_first_of(" \t\"=\\") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// RAII owners for the C handles.
template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Text = Handle<ocs_text, ocs_text_destroy>;
using Stack = Handle<ocs_stack, ocs_stack_destroy>;
using Config = Handle<ocs_config, ocs_config_destroy>;
using Spectrum = Handle<ocs_spectrum, ocs_spectrum_destroy>;
using Fringes = Handle<ocs_fringe_analysis, ocs_fringe_analysis_destroy>;
using Curve = Handle<ocs_de_curve, ocs_de_curve_destroy>;
using Design = Handle<ocs_design_result, ocs_design_result_destroy>;
using Report = Handle<ocs_run_report, ocs_run_report_destroy>;

std::string str(const Text& t) { return std::string(ocs_text_data(t.get()), ocs_text_size(t.get())); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIo, "io-error: cannot read '" + path + "'"};
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string sha256(const std::string& data) {
  char hex[65];
  check(ocs_sha256_hex(data.data(), data.size(), hex));
  return hex;
}

// Collects pending writes plus the run report; nothing touches disk until commit().
class Run {
 public:
  explicit Run(const char* command) : command_(command) { check(ocs_run_report_create(command, report_.out())); }

  void config(const ocs_config* cfg) { check(ocs_run_report_set_config(report_.get(), cfg)); }
  void input(const std::string& key, const std::string& value) {
    check(ocs_run_report_add_input(report_.get(), key.c_str(), value.c_str()));
  }
  void input(const std::string& key, double value) {
    check(ocs_run_report_add_input_number(report_.get(), key.c_str(), value));
  }
  void input_file(const std::string& key, const std::string& contents) { input(key + "_sha256", sha256(contents)); }
  void warn(const std::string& text) {
    check(ocs_run_report_add_warning(report_.get(), text.c_str()));
    std::cerr << "warning: " << text << "\n";
  }

  void output(const std::string& path, std::string data) {
    if (path.empty()) return;
    for (const auto& [p, d] : files_) {
      if (p == path) invalid("output path '" + path + "' given twice");
    }
    files_.emplace_back(path, std::move(data));
  }
  void report_to(std::string path) { report_path_ = std::move(path); }
  void field(const std::string& key, const std::string& value) { record_.emplace_back(key, quoted(value)); }
  void field(const std::string& key, double value) { record_.emplace_back(key, num(value)); }

  // Extra stdout lines printed before the summary record.
  void line(std::string text) { lines_.push_back(std::move(text)); }

  int commit() {
    const std::string digest = ocs_run_report_digest(report_.get());
    for (const auto& [path, data] : files_) check(ocs_run_report_add_output(report_.get(), path.c_str()));
    Text json;
    check(ocs_run_report_json(report_.get(), json.out()));

    std::vector<std::pair<std::string, std::string>> all = files_;
    if (!report_path_.empty()) all.emplace_back(report_path_, str(json));
    for (const auto& [path, data] : all) {
      const fs::path parent = fs::path(path).parent_path();
      std::error_code ec;
      if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw Failure{kIo, "io-error: directory '" + parent.string() + "' does not exist"};
      }
      if (fs::is_directory(path, ec)) throw Failure{kIo, "io-error: '" + path + "' is a directory"};
    }
    for (const auto& [path, data] : all) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << data;
      out.close();
      if (!out) throw Failure{kIo, "io-error: cannot write '" + path + "'"};
    }

    for (const auto& l : lines_) std::cout << l << "\n";
    std::cout << "command=" << command_;
    for (const auto& [k, v] : record_) std::cout << ' ' << k << '=' << v;
    for (const auto& [path, data] : files_) std::cout << " out=" << quoted(path);
    std::cout << " digest=" << digest << "\n";
    return kOk;
  }

 private:
  std::string command_;
  Report report_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::pair<std::string, std::string>> record_;
  std::vector<std::string> lines_;
  std::string report_path_;
};

void load_config(const std::string& path, Config& cfg, Run& run) {
  const std::string text = read_file(path);
  check(ocs_config_parse(text.data(), text.size(), cfg.out()));
  run.config(cfg.get());
}

std::string pick_out(const std::string& flag, const Config& cfg) {
  if (!flag.empty()) return flag;
  if (cfg.get()) return ocs_config_output_path(cfg.get());
  return {};
}

// ---------------------------------------------------------------- stack-spectrum

struct StackSpectrumArgs {
  std::string config, out, report;
  double min_nm = 1200, max_nm = 1700, step_nm = 1;
  bool ar = false;
};

int cmd_stack_spectrum(const StackSpectrumArgs& a) {
  Run run("stack-spectrum");
  Config cfg;
  load_config(a.config, cfg, run);
  run.input("min_nm", a.min_nm);
  run.input("max_nm", a.max_nm);
  run.input("step_nm", a.step_nm);
  run.input("stack", a.ar ? "ar" : "main");

  Stack stack;
  if (a.ar) {
    if (!ocs_config_has_ar_stack(cfg.get())) invalid("config: ar_stack: missing");
    check(ocs_config_ar_stack(cfg.get(), stack.out()));
  } else {
    if (!ocs_config_has_stack(cfg.get())) invalid("config: stack: missing");
    check(ocs_config_stack(cfg.get(), stack.out()));
  }
  Text csv;
  check(ocs_stack_spectrum_csv(stack.get(), a.min_nm, a.max_nm, a.step_nm, csv.out()));
  const std::string out = pick_out(a.out, cfg);
  if (out.empty()) invalid("no output path (use --out or set output_path in the config)");

  // Summarize the reflectance minimum, and the absorptance peak of the tagged nanowire layer.
  std::istringstream rows(str(csv));
  std::string line;
  std::getline(rows, line);
  const char* wire = ocs_config_stack_tag(cfg.get(), "nanowire");
  int wire_col = -1;
  {
    std::istringstream head(line);
    std::string cell;
    for (int c = 0; std::getline(head, cell, ','); ++c) {
      if (!a.ar && *wire && cell == std::string("A_") + wire) wire_col = c;
    }
  }
  double r_min = INFINITY, r_min_at = 0, a_max = -INFINITY, a_max_at = 0;
  std::size_t count = 0;
  while (std::getline(rows, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    ++count;
    if (v[1] < r_min) r_min = v[1], r_min_at = v[0];
    if (wire_col >= 0 && v[wire_col] > a_max) a_max = v[wire_col], a_max_at = v[0];
  }
  run.output(out, str(csv));
  run.report_to(a.report);
  run.field("rows", static_cast<double>(count));
  run.field("r_min", r_min);
  run.field("r_min_wavelength_nm", r_min_at);
  if (wire_col >= 0) {
    run.field("a_nanowire_max", a_max);
    run.field("a_nanowire_max_wavelength_nm", a_max_at);
  }
  return run.commit();
}

// ---------------------------------------------------------------- beam flags

struct BeamArgs {
  std::optional<double> wavelength_um, mfd_um, l_air_um, n_sub, aperture_size_um;
  std::string aperture, path;
};

void add_beam_flags(CLI::App* app, BeamArgs& b) {
  app->add_option("--wavelength-um", b.wavelength_um, "Wavelength in um");
  app->add_option("--mfd-um", b.mfd_um, "Fiber mode field diameter in um");
  app->add_option("--l-air-um", b.l_air_um, "Fiber-to-substrate air gap in um");
  app->add_option("--n-sub", b.n_sub, "Substrate refractive index");
  app->add_option("--aperture", b.aperture, "Aperture model")
      ->check(CLI::IsMember({"paper_disk", "disk", "square"}));
  app->add_option("--aperture-size-um", b.aperture_size_um, "Disk radius, or square side length, in um");
  app->add_option("--path-convention", b.path, "Path length convention")
      ->check(CLI::IsMember({"optical", "reduced"}));
}

ocs_beam_geometry resolve_beam(const BeamArgs& b, const Config& cfg, Run& run) {
  ocs_beam_geometry g;
  if (cfg.get()) {
    ocs_config_beam(cfg.get(), &g);
  } else {
    ocs_beam_geometry_default(&g);
  }
  if (b.wavelength_um) g.wavelength_um = *b.wavelength_um;
  if (b.mfd_um) g.mfd_um = *b.mfd_um;
  if (b.l_air_um) g.l_air_um = *b.l_air_um;
  if (b.n_sub) g.n_sub = *b.n_sub;
  if (b.aperture_size_um) g.aperture_size_um = *b.aperture_size_um;
  if (b.aperture == "paper_disk") g.aperture_kind = OCS_APERTURE_PAPER_DISK;
  if (b.aperture == "disk") g.aperture_kind = OCS_APERTURE_DISK;
  if (b.aperture == "square") g.aperture_kind = OCS_APERTURE_SQUARE;
  if (b.path == "optical") g.path_convention = OCS_PATH_OPTICAL;
  if (b.path == "reduced") g.path_convention = OCS_PATH_REDUCED;

  static const char* kinds[] = {"paper_disk", "disk", "square"};
  run.input("beam.wavelength_um", g.wavelength_um);
  run.input("beam.mfd_um", g.mfd_um);
  run.input("beam.l_air_um", g.l_air_um);
  run.input("beam.n_sub", g.n_sub);
  run.input("beam.aperture", kinds[g.aperture_kind]);
  run.input("beam.aperture_size_um", g.aperture_size_um);
  run.input("beam.path_convention", g.path_convention == OCS_PATH_OPTICAL ? "optical" : "reduced");
  return g;
}

// ---------------------------------------------------------------- coupling-curve

struct CouplingArgs {
  std::string config, out, report;
  std::vector<double> thickness;
  std::optional<double> from, to, step;
  BeamArgs beam;
};

int cmd_coupling_curve(const CouplingArgs& a) {
  Run run("coupling-curve");
  Config cfg;
  if (!a.config.empty()) load_config(a.config, cfg, run);
  const ocs_beam_geometry g = resolve_beam(a.beam, cfg, run);

  std::vector<double> t = a.thickness;
  const bool ranged = a.from || a.to || a.step;
  if (ranged) {
    if (!t.empty()) invalid("give either --thickness or --from/--to/--step, not both");
    if (!(a.from && a.to && a.step)) invalid("--from, --to and --step go together");
    if (!(*a.step > 0) || !(*a.to >= *a.from)) invalid("range needs step > 0 and to >= from");
    const double span = (*a.to - *a.from) / *a.step;
    if (span > 1e7) invalid("range has too many points");
    const auto n = static_cast<std::size_t>(std::floor(span * (1 + 1e-12))) + 1;
    for (std::size_t i = 0; i < n; ++i) t.push_back(*a.from + static_cast<double>(i) * *a.step);
  }
  if (t.empty()) invalid("no substrate thicknesses (use --thickness or --from/--to/--step)");
  for (std::size_t i = 0; i < t.size(); ++i) run.input("l_sub_um[" + std::to_string(i) + "]", t[i]);

  std::vector<ocs_coupling_point> pts(t.size());
  check(ocs_coupling_curve(&g, t.data(), t.size(), pts.data()));
  Text csv;
  check(ocs_coupling_curve_csv(&g, t.data(), t.size(), csv.out()));

  run.output(pick_out(a.out, cfg), str(csv));
  run.report_to(a.report);
  run.field("rows", static_cast<double>(pts.size()));
  if (pts.size() == 1) {
    run.field("l_opt_um", pts[0].l_opt_um);
    run.field("eta", pts[0].eta);
  } else {
    run.field("eta_first", pts.front().eta);
    run.field("eta_last", pts.back().eta);
  }
  if (a.out.empty() && (!cfg.get() || !*ocs_config_output_path(cfg.get()))) {
    std::string body = str(csv);
    if (!body.empty() && body.back() == '\n') body.pop_back();
    run.line(body);
  }
  return run.commit();
}

// ---------------------------------------------------------------- fringe

struct FringeSynthArgs {
  std::string config, out, report;
  double l_air_um = 20, l_sub_um = 45, n_sub = 1.7, min_nm = 1500, max_nm = 1600, step_nm = 0.02;
  std::optional<double> fiber_index;
  bool bare = false;
};

int cmd_fringe_synth(const FringeSynthArgs& a) {
  Run run("fringe-synth");
  Config cfg;
  if (!a.config.empty()) load_config(a.config, cfg, run);
  const double nf = a.fiber_index ? *a.fiber_index : (cfg.get() ? ocs_config_fiber_index(cfg.get()) : 1.45);
  for (auto [k, v] : {std::pair{"l_air_um", a.l_air_um}, {"l_sub_um", a.l_sub_um}, {"n_sub", a.n_sub},
                      {"min_nm", a.min_nm}, {"max_nm", a.max_nm}, {"step_nm", a.step_nm}, {"fiber_index", nf}}) {
    run.input(k, v);
  }
  run.input("front", a.bare || !cfg.get() || !ocs_config_has_stack(cfg.get()) ? "bare" : "stack");

  Stack cavity;
  if (!a.bare && cfg.get() && ocs_config_has_stack(cfg.get())) check(ocs_config_stack(cfg.get(), cavity.out()));
  ocs_surface_model model;
  check(ocs_surface_model_default(a.l_air_um, a.l_sub_um, a.n_sub, nf, cavity.get(), 0.5 * (a.min_nm + a.max_nm),
                                  &model));
  Spectrum spec;
  check(ocs_spectrum_synthesize(&model, a.min_nm, a.max_nm, a.step_nm, spec.out()));
  Text csv;
  check(ocs_spectrum_csv(spec.get(), csv.out()));

  const std::string out = pick_out(a.out, cfg);
  if (out.empty()) invalid("no output path (use --out)");
  run.output(out, str(csv));
  run.report_to(a.report);
  run.field("samples", static_cast<double>(ocs_spectrum_size(spec.get())));
  return run.commit();
}

struct FringeAnalyzeArgs {
  std::string in, out, report;
  std::vector<double> n;
};

int cmd_fringe_analyze(const FringeAnalyzeArgs& a) {
  Run run("fringe-analyze");
  const std::string text = read_file(a.in);
  run.input_file("in", text);
  for (std::size_t i = 0; i < a.n.size(); ++i) run.input("n[" + std::to_string(i) + "]", a.n[i]);

  Spectrum spec;
  check(ocs_spectrum_parse_csv(text.data(), text.size(), spec.out()));
  Fringes fr;
  check(ocs_analyze_fringes(spec.get(), fr.out()));
  Text csv;
  check(ocs_fringe_report_csv(fr.get(), csv.out()));

  const double mean = ocs_fringe_mean_lambda_nm(fr.get());
  const std::size_t count = ocs_fringe_count(fr.get());
  for (std::size_t i = 0; i < count; ++i) {
    ocs_fringe_component c;
    check(ocs_fringe_component_at(fr.get(), i, &c));
    std::string l = "component=" + std::to_string(i + 1) + " optical_distance_um=" + num(c.optical_distance_um) +
                    " delta_lambda_nm=" + num(c.delta_lambda_nm) + " strength=" + num(c.strength);
    for (double n : a.n) {
      double d;
      check(ocs_thickness_from_fringe(c.delta_lambda_nm, mean, n, &d));
      l += " thickness_um@n=" + num(n) + "=" + num(d);
    }
    run.line(std::move(l));
  }
  run.output(a.out, str(csv));
  run.report_to(a.report);
  run.field("components", static_cast<double>(count));
  run.field("mean_lambda_nm", mean);
  return run.commit();
}

// ---------------------------------------------------------------- de

struct DeComposeArgs {
  double coupling = 0, absorptance = 0, intrinsic = 0;
  double wavelength_nm = 1550;
  std::string report;
};

int cmd_de_compose(const DeComposeArgs& a) {
  Run run("de-compose");
  run.input("coupling", a.coupling);
  run.input("absorptance", a.absorptance);
  run.input("intrinsic", a.intrinsic);
  run.input("wavelength_nm", a.wavelength_nm);
  ocs_de_budget b{a.coupling, a.absorptance, a.intrinsic, a.wavelength_nm};
  double de;
  check(ocs_system_de(&b, &de));
  run.report_to(a.report);
  run.field("system_de", de);
  run.field("wavelength_nm", a.wavelength_nm);
  return run.commit();
}

struct DeCountsArgs {
  std::string in, out, report;
  std::optional<double> output_cps, dark_cps, flux_cps;
  bool no_subtract = false;
};

int cmd_de_from_counts(const DeCountsArgs& a) {
  Run run("de-from-counts");
  const int subtract = a.no_subtract ? 0 : 1;
  run.input("subtraction", subtract ? "on" : "off");
  const bool single = a.output_cps || a.dark_cps || a.flux_cps;
  if (single == !a.in.empty()) invalid("give either --in or --output-cps/--dark-cps/--flux-cps");
  if (single) {
    if (!(a.output_cps && a.dark_cps && a.flux_cps)) invalid("--output-cps, --dark-cps and --flux-cps go together");
    if (!a.out.empty()) invalid("--out needs --in");
    run.input("output_cps", *a.output_cps);
    run.input("dark_cps", *a.dark_cps);
    run.input("flux_cps", *a.flux_cps);
    ocs_count_measurement m{*a.output_cps, *a.dark_cps, *a.flux_cps};
    ocs_count_efficiency e;
    check(ocs_de_from_counts(&m, subtract, &e));
    if (e.below_dark) run.warn("output rate is below the dark rate; de clamped to 0");
    run.report_to(a.report);
    run.field("de", e.de);
    run.field("de_raw", e.de_raw);
    run.field("subtraction", subtract ? "on" : "off");
    run.field("below_dark", e.below_dark ? "1" : "0");
    return run.commit();
  }
  const std::string text = read_file(a.in);
  run.input_file("in", text);
  Text csv;
  check(ocs_counts_report_csv(text.data(), text.size(), subtract, csv.out()));
  std::size_t rows = 0, below = 0;
  {
    std::istringstream s(str(csv));
    std::string line;
    while (std::getline(s, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("output_cps", 0) == 0) continue;
      ++rows;
      if (line.back() == '1') ++below;
    }
  }
  if (below) run.warn(std::to_string(below) + " row(s) have output below dark; de clamped to 0");
  if (a.out.empty()) invalid("--in needs --out");
  run.output(a.out, str(csv));
  run.report_to(a.report);
  run.field("rows", static_cast<double>(rows));
  run.field("below_dark", static_cast<double>(below));
  run.field("subtraction", subtract ? "on" : "off");
  return run.commit();
}

struct DeAtRateArgs {
  std::string curve, label, axis = "log", report;
  double rate = 0, wavelength_nm = 1550;
};

int cmd_de_at_dark_rate(const DeAtRateArgs& a) {
  Run run("de-at-dark-rate");
  const std::string text = read_file(a.curve);
  run.input_file("curve", text);
  run.input("label", a.label);
  run.input("wavelength_nm", a.wavelength_nm);
  run.input("dark_rate_cps", a.rate);
  run.input("axis", a.axis);
  Curve c;
  check(ocs_de_curve_parse_csv(text.data(), text.size(), a.label.c_str(), a.wavelength_nm, c.out()));
  double de;
  check(ocs_de_at_dark_rate(c.get(), a.rate, a.axis == "log" ? OCS_DARK_AXIS_LOG : OCS_DARK_AXIS_LINEAR, &de));
  run.report_to(a.report);
  run.field("de", de);
  run.field("dark_rate_cps", a.rate);
  if (!a.label.empty()) run.field("label", a.label);
  run.field("wavelength_nm", a.wavelength_nm);
  return run.commit();
}

struct DeEnhancementArgs {
  double after = 0, before = 0;
  std::string after_label = "after", before_label = "before", report;
};

int cmd_de_enhancement(const DeEnhancementArgs& a) {
  Run run("de-enhancement");
  run.input("de_after", a.after);
  run.input("de_before", a.before);
  run.input("after_label", a.after_label);
  run.input("before_label", a.before_label);
  double f;
  check(ocs_enhancement_factor(a.after, a.before, &f));
  run.report_to(a.report);
  run.field("enhancement", f);
  run.field("after_label", a.after_label);
  run.field("before_label", a.before_label);
  return run.commit();
}

// ---------------------------------------------------------------- design

struct DesignArgs {
  std::string config, variable, objective, layer, trace_out, out, report;
  double lower = 0, upper = 0, granularity = 0, wavelength_nm = 1550;
  BeamArgs beam;
};

int cmd_design(const DesignArgs& a) {
  Run run("design");
  Config cfg;
  if (!a.config.empty()) load_config(a.config, cfg, run);
  int var;
  check(ocs_design_variable_parse(a.variable.c_str(), &var));
  run.input("variable", a.variable);
  run.input("lower", a.lower);
  run.input("upper", a.upper);
  run.input("granularity", a.granularity);
  const ocs_design_space space{var, a.lower, a.upper, a.granularity};

  Design res;
  if (var == OCS_VAR_SUBSTRATE_THICKNESS_UM) {
    if (!a.objective.empty() && a.objective != "coupling") invalid("substrate design only supports --objective coupling");
    const ocs_beam_geometry g = resolve_beam(a.beam, cfg, run);
    check(ocs_optimize_substrate(&g, &space, res.out()));
  } else {
    if (!cfg.get()) invalid("--config is required for layer design");
    const bool ar = var == OCS_VAR_AR_THICKNESS_NM;
    Stack stack;
    if (ar) {
      if (!ocs_config_has_ar_stack(cfg.get())) invalid("config: ar_stack: missing");
      check(ocs_config_ar_stack(cfg.get(), stack.out()));
    } else {
      if (!ocs_config_has_stack(cfg.get())) invalid("config: stack: missing");
      check(ocs_config_stack(cfg.get(), stack.out()));
    }
    const std::string objective = a.objective.empty() ? (ar ? "antireflection" : "absorptance") : a.objective;
    if (objective != "absorptance" && objective != "antireflection") {
      invalid("--objective must be absorptance or antireflection for layer design");
    }
    std::string label = a.layer;
    if (label.empty()) label = ar ? ocs_config_ar_stack_tag(cfg.get(), "ar") : ocs_config_stack_tag(cfg.get(), "cavity");
    if (label.empty()) invalid("no layer to vary (tag one in the config or pass --layer)");
    const char* wire = ar ? ocs_config_ar_stack_tag(cfg.get(), "nanowire") : ocs_config_stack_tag(cfg.get(), "nanowire");
    if (objective == "absorptance" && !*wire) invalid("absorptance objective needs a nanowire layer tag in the config");
    run.input("objective", objective);
    run.input("layer", label);
    run.input("wavelength_nm", a.wavelength_nm);
    check(ocs_optimize_layer(stack.get(), label.c_str(),
                             objective == "absorptance" ? OCS_OBJECTIVE_LAYER_ABSORPTANCE : OCS_OBJECTIVE_ANTIREFLECTION,
                             wire, &space, a.wavelength_nm, res.out()));
  }
  Text trace, result;
  check(ocs_design_trace_csv(res.get(), trace.out()));
  check(ocs_design_result_csv(res.get(), var, result.out()));
  if (!a.trace_out.empty() && a.trace_out == a.out) invalid("--trace-out and --out must differ");
  run.output(a.trace_out, str(trace));
  run.output(a.out, str(result));
  run.report_to(a.report);
  run.field("variable", ocs_design_variable_name(var));
  run.field("argmax", ocs_design_argmax(res.get()));
  run.field("objective", ocs_design_objective(res.get()));
  run.field("snapped", ocs_design_snapped(res.get()) ? "1" : "0");
  run.field("evaluations", static_cast<double>(ocs_design_trace_size(res.get())));
  return run.commit();
}

struct DesignJointArgs {
  std::string config, report;
  double cavity_lower = 50, cavity_upper = 600, ar_lower = 50, ar_upper = 600, granularity = 0,
         wavelength_nm = 1550;
};

int cmd_design_joint(const DesignJointArgs& a) {
  Run run("design-joint");
  Config cfg;
  load_config(a.config, cfg, run);
  for (auto [k, v] : {std::pair{"cavity_lower", a.cavity_lower}, {"cavity_upper", a.cavity_upper},
                      {"ar_lower", a.ar_lower}, {"ar_upper", a.ar_upper}, {"granularity", a.granularity},
                      {"wavelength_nm", a.wavelength_nm}}) {
    run.input(k, v);
  }
  if (!ocs_config_has_stack(cfg.get())) invalid("config: stack: missing");
  if (!ocs_config_has_ar_stack(cfg.get())) invalid("config: ar_stack: missing");
  Stack cavity, ar;
  check(ocs_config_stack(cfg.get(), cavity.out()));
  check(ocs_config_ar_stack(cfg.get(), ar.out()));
  const ocs_design_space cs{OCS_VAR_CAVITY_THICKNESS_NM, a.cavity_lower, a.cavity_upper, a.granularity};
  const ocs_design_space as{OCS_VAR_AR_THICKNESS_NM, a.ar_lower, a.ar_upper, a.granularity};
  ocs_joint_design d;
  check(ocs_optimize_device(cavity.get(), ocs_config_stack_tag(cfg.get(), "cavity"),
                            ocs_config_stack_tag(cfg.get(), "nanowire"), ar.get(),
                            ocs_config_ar_stack_tag(cfg.get(), "ar"), &cs, &as, a.wavelength_nm, &d));
  if (!d.converged) run.warn("coordinate sweeps hit the iteration cap before converging");
  run.report_to(a.report);
  run.field("cavity_thickness_nm", d.cavity_thickness_nm);
  run.field("ar_thickness_nm", d.ar_thickness_nm);
  run.field("objective", d.objective);
  run.field("sweeps", static_cast<double>(d.sweeps));
  run.field("converged", d.converged ? "1" : "0");
  return run.commit();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and analysis tools for fiber-coupled optical-cavity SNSPDs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ocs_version()));

  std::function<int()> action;

  StackSpectrumArgs ss;
  auto* c_ss = app.add_subcommand("stack-spectrum", "R/T/A sweep of a configured layer stack");
  c_ss->add_option("--config", ss.config, "Run configuration (JSON)")->required();
  c_ss->add_option("--min", ss.min_nm, "First wavelength in nm");
  c_ss->add_option("--max", ss.max_nm, "Last wavelength in nm");
  c_ss->add_option("--step", ss.step_nm, "Wavelength step in nm");
  c_ss->add_flag("--ar", ss.ar, "Sweep the config's ar_stack instead of its stack");
  c_ss->add_option("--out", ss.out, "Output CSV");
  c_ss->add_option("--report", ss.report, "Run report JSON");
  c_ss->callback([&] { action = [&] { return cmd_stack_spectrum(ss); }; });

  CouplingArgs cc;
  auto* c_cc = app.add_subcommand("coupling-curve", "Coupled fraction versus substrate thickness");
  c_cc->add_option("--config", cc.config, "Run configuration with a beam section");
  c_cc->add_option("--thickness", cc.thickness, "Substrate thickness in um (repeatable)")->delimiter(',');
  c_cc->add_option("--from", cc.from, "Range start in um");
  c_cc->add_option("--to", cc.to, "Range end in um (inclusive)");
  c_cc->add_option("--step", cc.step, "Range step in um");
  add_beam_flags(c_cc, cc.beam);
  c_cc->add_option("--out", cc.out, "Output CSV (printed to stdout when omitted)");
  c_cc->add_option("--report", cc.report, "Run report JSON");
  c_cc->callback([&] { action = [&] { return cmd_coupling_curve(cc); }; });

  auto* c_fr = app.add_subcommand("fringe", "Back-reflection fringe synthesis and analysis");
  c_fr->require_subcommand(1);
  FringeSynthArgs fs_;
  auto* c_fs = c_fr->add_subcommand("synth", "Synthesize a three-surface reflection spectrum");
  c_fs->add_option("--config", fs_.config, "Run configuration (its stack sets the front-face reflection)");
  c_fs->add_option("--l-air-um", fs_.l_air_um, "Air gap in um");
  c_fs->add_option("--l-sub-um", fs_.l_sub_um, "Substrate thickness in um");
  c_fs->add_option("--n-sub", fs_.n_sub, "Substrate index");
  c_fs->add_option("--fiber-index", fs_.fiber_index, "Fiber core index");
  c_fs->add_flag("--bare", fs_.bare, "Treat the substrate front face as bare even when a stack is configured");
  c_fs->add_option("--min", fs_.min_nm, "First wavelength in nm");
  c_fs->add_option("--max", fs_.max_nm, "Last wavelength in nm");
  c_fs->add_option("--step", fs_.step_nm, "Wavelength step in nm");
  c_fs->add_option("--out", fs_.out, "Output spectrum CSV");
  c_fs->add_option("--report", fs_.report, "Run report JSON");
  c_fs->callback([&] { action = [&] { return cmd_fringe_synth(fs_); }; });

  FringeAnalyzeArgs fa;
  auto* c_fa = c_fr->add_subcommand("analyze", "Extract fringe periods from a spectrum CSV");
  c_fa->add_option("--in", fa.in, "Spectrum CSV (wavelength_nm,power)")->required();
  c_fa->add_option("--n", fa.n, "Index for thickness conversion (repeatable)")->delimiter(',');
  c_fa->add_option("--out", fa.out, "Fringe report CSV");
  c_fa->add_option("--report", fa.report, "Run report JSON");
  c_fa->callback([&] { action = [&] { return cmd_fringe_analyze(fa); }; });

  auto* c_de = app.add_subcommand("de", "Detection efficiency arithmetic");
  c_de->require_subcommand(1);
  DeComposeArgs dc;
  auto* c_dc = c_de->add_subcommand("compose", "System DE from coupling, absorptance and intrinsic efficiency");
  c_dc->add_option("coupling", dc.coupling)->required();
  c_dc->add_option("absorptance", dc.absorptance)->required();
  c_dc->add_option("intrinsic", dc.intrinsic)->required();
  c_dc->add_option("--wavelength-nm", dc.wavelength_nm, "Wavelength tag");
  c_dc->add_option("--report", dc.report, "Run report JSON");
  c_dc->callback([&] { action = [&] { return cmd_de_compose(dc); }; });

  DeCountsArgs dk;
  auto* c_dk = c_de->add_subcommand("from-counts", "DE from output, dark and input photon rates");
  c_dk->add_option("--in", dk.in, "Counts CSV (output_cps,dark_cps,flux_cps)");
  c_dk->add_option("--output-cps", dk.output_cps);
  c_dk->add_option("--dark-cps", dk.dark_cps);
  c_dk->add_option("--flux-cps", dk.flux_cps);
  c_dk->add_flag("--no-subtract", dk.no_subtract, "Do not subtract the dark rate");
  c_dk->add_option("--out", dk.out, "Per-row report CSV");
  c_dk->add_option("--report", dk.report, "Run report JSON");
  c_dk->callback([&] { action = [&] { return cmd_de_from_counts(dk); }; });

  DeAtRateArgs dr;
  auto* c_dr = c_de->add_subcommand("at-dark-rate", "Interpolate a DE curve at a dark-count rate");
  c_dr->add_option("--curve", dr.curve, "DE curve CSV (dark_count_rate_cps,de)")->required();
  c_dr->add_option("--rate", dr.rate, "Dark-count rate in c/s")->required();
  c_dr->add_option("--label", dr.label, "Curve label");
  c_dr->add_option("--wavelength-nm", dr.wavelength_nm, "Curve wavelength");
  c_dr->add_option("--axis", dr.axis, "Interpolation axis")->check(CLI::IsMember({"log", "linear"}));
  c_dr->add_option("--report", dr.report, "Run report JSON");
  c_dr->callback([&] { action = [&] { return cmd_de_at_dark_rate(dr); }; });

  DeEnhancementArgs de_;
  auto* c_en = c_de->add_subcommand("enhancement", "Ratio of two detection efficiencies");
  c_en->add_option("after", de_.after)->required();
  c_en->add_option("before", de_.before)->required();
  c_en->add_option("--after-label", de_.after_label);
  c_en->add_option("--before-label", de_.before_label);
  c_en->add_option("--report", de_.report, "Run report JSON");
  c_en->callback([&] { action = [&] { return cmd_de_enhancement(de_); }; });

  DesignArgs dg;
  auto* c_dg = app.add_subcommand("design", "Optimize one design variable");
  c_dg->add_option("--variable", dg.variable, "cavity_thickness_nm, ar_thickness_nm or substrate_thickness_um")
      ->required();
  c_dg->add_option("--lower", dg.lower, "Lower bound")->required();
  c_dg->add_option("--upper", dg.upper, "Upper bound")->required();
  c_dg->add_option("--granularity", dg.granularity, "Fabrication granularity (0 = continuous)");
  c_dg->add_option("--wavelength-nm", dg.wavelength_nm, "Target wavelength");
  c_dg->add_option("--objective", dg.objective, "absorptance, antireflection or coupling");
  c_dg->add_option("--layer", dg.layer, "Layer label to vary (defaults to the config tag)");
  c_dg->add_option("--config", dg.config, "Run configuration");
  add_beam_flags(c_dg, dg.beam);
  c_dg->add_option("--trace-out", dg.trace_out, "Trace CSV (candidate,objective)");
  c_dg->add_option("--out", dg.out, "Result CSV (variable,argmax,objective)");
  c_dg->add_option("--report", dg.report, "Run report JSON");
  c_dg->callback([&] { action = [&] { return cmd_design(dg); }; });

  DesignJointArgs dj;
  auto* c_dj = app.add_subcommand("design-joint", "Coordinate-wise cavity + AR design");
  c_dj->add_option("--config", dj.config, "Run configuration with stack and ar_stack")->required();
  c_dj->add_option("--cavity-lower", dj.cavity_lower);
  c_dj->add_option("--cavity-upper", dj.cavity_upper);
  c_dj->add_option("--ar-lower", dj.ar_lower);
  c_dj->add_option("--ar-upper", dj.ar_upper);
  c_dj->add_option("--granularity", dj.granularity);
  c_dj->add_option("--wavelength-nm", dj.wavelength_nm);
  c_dj->add_option("--report", dj.report, "Run report JSON");
  c_dj->callback([&] { action = [&] { return cmd_design_joint(dj); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    return action ? action() : kValidation;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: internal-error: " << e.what() << "\n";
    return kInternal;
  }
}
