#include "ocsnspd/ocsnspd.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <optional>
#include <span>
#include <new>
#include <string>
#include <utility>

#include "core/beam_coupling.hpp"
#include "core/config.hpp"
#include "core/design_optimizer.hpp"
#include "core/detector_model.hpp"
#include "core/error.hpp"
#include "core/interferometry.hpp"
#include "core/reports.hpp"
#include "core/run_report.hpp"
#include "core/stack_optics.hpp"

struct ocs_text {
  std::string data;
};

struct ocs_stack {
  ocs::Stack value;
};

struct ocs_spectrum {
  ocs::ReflectionSpectrum value;
};

struct ocs_fringe_analysis {
  ocs::FringeAnalysis value;
};

struct ocs_de_curve {
  ocs::DECurve value;
};

struct ocs_design_result {
  ocs::DesignResult value;
};

struct ocs_config {
  ocs::RunConfig value;
  std::string digest;
};

struct ocs_run_report {
  ocs::RunReport value;
  std::string digest;
};

namespace {

thread_local std::string g_last_error;

ocs_status to_status(ocs::ErrorCode code) {
  switch (code) {
    case ocs::ErrorCode::InvalidArgument: return OCS_ERR_INVALID_ARGUMENT;
    case ocs::ErrorCode::UnreachableTarget: return OCS_ERR_UNREACHABLE_TARGET;
    case ocs::ErrorCode::NoFringe: return OCS_ERR_NO_FRINGE;
    case ocs::ErrorCode::InsufficientData: return OCS_ERR_INSUFFICIENT_DATA;
    case ocs::ErrorCode::ExtrapolationRefused: return OCS_ERR_EXTRAPOLATION_REFUSED;
    case ocs::ErrorCode::UndefinedRatio: return OCS_ERR_UNDEFINED_RATIO;
    case ocs::ErrorCode::NonFinite: return OCS_ERR_NON_FINITE;
    case ocs::ErrorCode::Parse: return OCS_ERR_PARSE;
    case ocs::ErrorCode::Io: return OCS_ERR_IO;
  }
  return OCS_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread-local message.
template <class F>
ocs_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return OCS_OK;
  } catch (const ocs::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OCS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OCS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return OCS_ERR_INTERNAL;
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (p == nullptr) ocs::fail(ocs::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

std::string text_arg(const char* s, const char* what) {
  need(s, what);
  return s;
}

ocs::ComplexIndex to_core(ocs_index i) { return {i.n, i.k}; }
ocs_index to_c(ocs::ComplexIndex i) { return {i.n, i.k}; }

ocs::BeamGeometry to_core(const ocs_beam_geometry& g) {
  ocs::BeamGeometry out;
  out.wavelength_um = g.wavelength_um;
  out.mfd_um = g.mfd_um;
  out.l_air_um = g.l_air_um;
  out.l_sub_um = g.l_sub_um;
  out.n_sub = g.n_sub;
  switch (g.aperture_kind) {
    case OCS_APERTURE_PAPER_DISK: out.aperture.kind = ocs::ApertureKind::PaperDisk; break;
    case OCS_APERTURE_DISK: out.aperture.kind = ocs::ApertureKind::Disk; break;
    case OCS_APERTURE_SQUARE: out.aperture.kind = ocs::ApertureKind::Square; break;
    default: ocs::fail(ocs::ErrorCode::InvalidArgument, "unknown aperture kind");
  }
  out.aperture.size_um = g.aperture_size_um;
  switch (g.path_convention) {
    case OCS_PATH_OPTICAL: out.path = ocs::PathConvention::Optical; break;
    case OCS_PATH_REDUCED: out.path = ocs::PathConvention::Reduced; break;
    default: ocs::fail(ocs::ErrorCode::InvalidArgument, "unknown path convention");
  }
  return out;
}

ocs_beam_geometry to_c(const ocs::BeamGeometry& g) {
  ocs_beam_geometry out{};
  out.wavelength_um = g.wavelength_um;
  out.mfd_um = g.mfd_um;
  out.l_air_um = g.l_air_um;
  out.l_sub_um = g.l_sub_um;
  out.n_sub = g.n_sub;
  out.aperture_kind = g.aperture.kind == ocs::ApertureKind::PaperDisk ? OCS_APERTURE_PAPER_DISK
                      : g.aperture.kind == ocs::ApertureKind::Disk    ? OCS_APERTURE_DISK
                                                                      : OCS_APERTURE_SQUARE;
  out.aperture_size_um = g.aperture.size_um;
  out.path_convention = g.path == ocs::PathConvention::Optical ? OCS_PATH_OPTICAL : OCS_PATH_REDUCED;
  return out;
}

ocs::DesignSpace to_core(const ocs_design_space& s) {
  if (s.variable < OCS_VAR_CAVITY_THICKNESS_NM || s.variable > OCS_VAR_SUBSTRATE_THICKNESS_UM) {
    ocs::fail(ocs::ErrorCode::InvalidArgument, "unknown design variable");
  }
  return ocs::DesignSpace{static_cast<ocs::DesignVariable>(s.variable), s.lower, s.upper, s.granularity};
}

void emit(std::string data, ocs_text** out) {
  need(out, "out");
  *out = new ocs_text{std::move(data)};
}

const char* stack_tag(const ocs::StackSpec& spec, const char* tag) {
  if (tag == nullptr) return "";
  const std::string t = tag;
  if (t == "nanowire") return spec.nanowire_label.c_str();
  if (t == "cavity") return spec.cavity_label.c_str();
  if (t == "ar") return spec.ar_label.c_str();
  return "";
}

}  // namespace

extern "C" {

const char* ocs_version(void) { return "1.0.0"; }

const char* ocs_status_name(ocs_status status) {
  switch (status) {
    case OCS_OK: return "ok";
    case OCS_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case OCS_ERR_UNREACHABLE_TARGET: return "unreachable-target";
    case OCS_ERR_NO_FRINGE: return "no-fringe";
    case OCS_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case OCS_ERR_EXTRAPOLATION_REFUSED: return "extrapolation-refused";
    case OCS_ERR_UNDEFINED_RATIO: return "undefined-ratio";
    case OCS_ERR_NON_FINITE: return "non-finite";
    case OCS_ERR_PARSE: return "parse-error";
    case OCS_ERR_IO: return "io-error";
    case OCS_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* ocs_last_error_message(void) { return g_last_error.c_str(); }

const char* ocs_text_data(const ocs_text* text) { return text ? text->data.c_str() : ""; }
size_t ocs_text_size(const ocs_text* text) { return text ? text->data.size() : 0; }
void ocs_text_destroy(ocs_text* text) { delete text; }

/* Stack optics */

ocs_status ocs_stack_create(ocs_index incident, ocs_index exit, ocs_stack** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ocs_stack{ocs::Stack{to_core(incident), {}, to_core(exit)}};
  });
}

ocs_status ocs_stack_clone(const ocs_stack* stack, ocs_stack** out) {
  return guarded([&] {
    need(stack, "stack");
    need(out, "out");
    *out = new ocs_stack{stack->value};
  });
}

void ocs_stack_destroy(ocs_stack* stack) { delete stack; }

ocs_status ocs_stack_add_layer(ocs_stack* stack, const char* label, double thickness_nm, ocs_index index) {
  return guarded([&] {
    need(stack, "stack");
    ocs::require(thickness_nm > 0.0, "layer thickness must be > 0");
    ocs::require(index.n > 0.0 && index.k >= 0.0, "layer index needs n > 0 and k >= 0");
    stack->value.layers.push_back(ocs::Layer{text_arg(label, "label"), thickness_nm, to_core(index)});
  });
}

ocs_status ocs_stack_set_thickness(ocs_stack* stack, size_t layer, double thickness_nm) {
  return guarded([&] {
    need(stack, "stack");
    ocs::require(layer < stack->value.layers.size(), "layer index out of range");
    ocs::require(thickness_nm > 0.0, "layer thickness must be > 0");
    stack->value.layers[layer].thickness_nm = thickness_nm;
  });
}

size_t ocs_stack_layer_count(const ocs_stack* stack) { return stack ? stack->value.layers.size() : 0; }

ocs_status ocs_stack_layer_label(const ocs_stack* stack, size_t layer, const char** label) {
  return guarded([&] {
    need(stack, "stack");
    need(label, "label");
    ocs::require(layer < stack->value.layers.size(), "layer index out of range");
    *label = stack->value.layers[layer].label.c_str();
  });
}

ocs_status ocs_stack_find_layer(const ocs_stack* stack, const char* label, size_t* layer) {
  return guarded([&] {
    need(stack, "stack");
    need(layer, "layer");
    *layer = stack->value.find_layer(text_arg(label, "label"));
  });
}

ocs_status ocs_stack_response(const ocs_stack* stack, double wavelength_nm, ocs_response* out,
                              double* per_layer, size_t per_layer_capacity) {
  return guarded([&] {
    need(stack, "stack");
    need(out, "out");
    if (per_layer) {
      ocs::require(per_layer_capacity >= stack->value.layers.size(), "per_layer buffer is too small");
    }
    const auto r = ocs::stack_response(stack->value, wavelength_nm);
    *out = ocs_response{r.wavelength_nm, r.R, r.T, r.A_total};
    if (per_layer) std::copy(r.A_per_layer.begin(), r.A_per_layer.end(), per_layer);
  });
}

ocs_status ocs_stack_spectrum_csv(const ocs_stack* stack, double min_nm, double max_nm, double step_nm,
                                  ocs_text** out) {
  return guarded([&] {
    need(stack, "stack");
    emit(ocs::stack_spectrum_csv(stack->value, min_nm, max_nm, step_nm), out);
  });
}

ocs_status ocs_fit_extinction(ocs_index base, double film_thickness_nm, ocs_index substrate,
                              double target_absorptance, double wavelength_nm, ocs_index* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(ocs::fit_extinction(to_core(base), film_thickness_nm, to_core(substrate), target_absorptance,
                                    wavelength_nm));
  });
}

ocs_status ocs_quarter_wave_thickness(ocs_index index, double wavelength_nm, double* out_nm) {
  return guarded([&] {
    need(out_nm, "out");
    *out_nm = ocs::quarter_wave_thickness(to_core(index), wavelength_nm);
  });
}

/* Beam coupling */

void ocs_beam_geometry_default(ocs_beam_geometry* geom) {
  if (geom) *geom = to_c(ocs::BeamGeometry{});
}

ocs_status ocs_spot_radius(double w0_um, double wavelength_um, double x_um, double* out_um) {
  return guarded([&] {
    need(out_um, "out");
    *out_um = ocs::spot_radius(w0_um, wavelength_um, x_um);
  });
}

ocs_status ocs_optical_path_length(const ocs_beam_geometry* geom, double* out_um) {
  return guarded([&] {
    need(geom, "geom");
    need(out_um, "out");
    *out_um = ocs::optical_path_length(to_core(*geom));
  });
}

ocs_status ocs_coupled_fraction(const ocs_beam_geometry* geom, double* out) {
  return guarded([&] {
    need(geom, "geom");
    need(out, "out");
    *out = ocs::coupled_fraction(to_core(*geom));
  });
}

ocs_status ocs_coupling_curve(const ocs_beam_geometry* geom, const double* substrate_um, size_t count,
                              ocs_coupling_point* out) {
  return guarded([&] {
    need(geom, "geom");
    need(substrate_um, "substrate thicknesses");
    need(out, "out");
    const auto points = ocs::coupling_curve(to_core(*geom), std::span<const double>(substrate_um, count));
    for (std::size_t i = 0; i < points.size(); ++i) {
      out[i] = ocs_coupling_point{points[i].l_sub_um, points[i].l_opt_um, points[i].eta, points[i].eta_normalized};
    }
  });
}

ocs_status ocs_coupling_curve_csv(const ocs_beam_geometry* geom, const double* substrate_um, size_t count,
                                  ocs_text** out) {
  return guarded([&] {
    need(geom, "geom");
    need(substrate_um, "substrate thicknesses");
    emit(ocs::coupling_curve_csv(ocs::coupling_curve(to_core(*geom), std::span<const double>(substrate_um, count))),
         out);
  });
}

/* Interferometry */

ocs_status ocs_surface_model_default(double l_air_um, double l_sub_um, double n_sub, double fiber_index,
                                     const ocs_stack* cavity, double wavelength_nm, ocs_surface_model* out) {
  return guarded([&] {
    need(out, "out");
    std::optional<ocs::Stack> stack;
    if (cavity) stack = cavity->value;
    const auto m = ocs::default_surface_model(l_air_um, l_sub_um, n_sub, fiber_index, stack, wavelength_nm);
    for (int i = 0; i < 3; ++i) {
      out->r_re[i] = m.r[i].real();
      out->r_im[i] = m.r[i].imag();
    }
    out->l_air_um = m.l_air_um;
    out->l_sub_um = m.l_sub_um;
    out->n_sub = m.n_sub;
  });
}

ocs_status ocs_spectrum_synthesize(const ocs_surface_model* model, double min_nm, double max_nm, double step_nm,
                                   ocs_spectrum** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    ocs::SurfaceModel m;
    for (int i = 0; i < 3; ++i) m.r[i] = {model->r_re[i], model->r_im[i]};
    m.l_air_um = model->l_air_um;
    m.l_sub_um = model->l_sub_um;
    m.n_sub = model->n_sub;
    *out = new ocs_spectrum{ocs::synthesize_spectrum(m, min_nm, max_nm, step_nm)};
  });
}

ocs_status ocs_spectrum_from_arrays(const double* wavelength_nm, const double* power, size_t count,
                                    ocs_spectrum** out) {
  return guarded([&] {
    need(out, "out");
    ocs::ReflectionSpectrum s;
    if (count) {
      need(wavelength_nm, "wavelength_nm");
      need(power, "power");
    }
    for (size_t i = 0; i < count; ++i) s.samples.push_back({wavelength_nm[i], power[i]});
    ocs::validate(s);
    *out = new ocs_spectrum{std::move(s)};
  });
}

ocs_status ocs_spectrum_parse_csv(const char* text, size_t size, ocs_spectrum** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new ocs_spectrum{ocs::parse_spectrum_csv(std::string_view(text, size))};
  });
}

size_t ocs_spectrum_size(const ocs_spectrum* spectrum) { return spectrum ? spectrum->value.samples.size() : 0; }

ocs_status ocs_spectrum_sample(const ocs_spectrum* spectrum, size_t i, double* wavelength_nm, double* power) {
  return guarded([&] {
    need(spectrum, "spectrum");
    ocs::require(i < spectrum->value.samples.size(), "sample index out of range");
    if (wavelength_nm) *wavelength_nm = spectrum->value.samples[i].wavelength_nm;
    if (power) *power = spectrum->value.samples[i].power;
  });
}

ocs_status ocs_spectrum_csv(const ocs_spectrum* spectrum, ocs_text** out) {
  return guarded([&] {
    need(spectrum, "spectrum");
    emit(ocs::spectrum_csv(spectrum->value), out);
  });
}

void ocs_spectrum_destroy(ocs_spectrum* spectrum) { delete spectrum; }

ocs_status ocs_analyze_fringes(const ocs_spectrum* spectrum, ocs_fringe_analysis** out) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(out, "out");
    *out = new ocs_fringe_analysis{ocs::analyze_fringes(spectrum->value)};
  });
}

size_t ocs_fringe_count(const ocs_fringe_analysis* analysis) {
  return analysis ? analysis->value.components.size() : 0;
}

ocs_status ocs_fringe_component_at(const ocs_fringe_analysis* analysis, size_t i, ocs_fringe_component* out) {
  return guarded([&] {
    need(analysis, "analysis");
    need(out, "out");
    ocs::require(i < analysis->value.components.size(), "component index out of range");
    const auto& c = analysis->value.components[i];
    *out = ocs_fringe_component{c.delta_lambda_nm, c.optical_distance_um, c.strength};
  });
}

double ocs_fringe_mean_lambda_nm(const ocs_fringe_analysis* analysis) {
  return analysis ? analysis->value.mean_lambda_nm : 0.0;
}

ocs_status ocs_fringe_report_csv(const ocs_fringe_analysis* analysis, ocs_text** out) {
  return guarded([&] {
    need(analysis, "analysis");
    emit(ocs::fringe_report_csv(analysis->value), out);
  });
}

void ocs_fringe_analysis_destroy(ocs_fringe_analysis* analysis) { delete analysis; }

ocs_status ocs_thickness_from_fringe(double delta_lambda_nm, double mean_lambda_nm, double n, double* out_um) {
  return guarded([&] {
    need(out_um, "out");
    *out_um = ocs::thickness_from_fringe(delta_lambda_nm, mean_lambda_nm, n);
  });
}

/* Detector model */

ocs_status ocs_system_de(const ocs_de_budget* budget, double* out) {
  return guarded([&] {
    need(budget, "budget");
    need(out, "out");
    *out = ocs::system_de({budget->coupling, budget->absorptance, budget->intrinsic, budget->wavelength_nm});
  });
}

ocs_status ocs_infer_intrinsic(double coupling, double absorptance, double system_de, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ocs::infer_intrinsic(coupling, absorptance, system_de);
  });
}

ocs_status ocs_de_from_counts(const ocs_count_measurement* m, int subtract_dark, ocs_count_efficiency* out) {
  return guarded([&] {
    need(m, "measurement");
    need(out, "out");
    const auto r = ocs::de_from_counts({m->output_cps, m->dark_cps, m->flux_cps}, subtract_dark != 0);
    *out = ocs_count_efficiency{r.de, r.de_raw, r.subtracted ? 1 : 0, r.below_dark ? 1 : 0};
  });
}

ocs_status ocs_counts_report_csv(const char* text, size_t size, int subtract_dark, ocs_text** out) {
  return guarded([&] {
    need(text, "text");
    emit(ocs::counts_report_csv(ocs::parse_counts_csv(std::string_view(text, size)), subtract_dark != 0), out);
  });
}

ocs_status ocs_de_curve_parse_csv(const char* text, size_t size, const char* label, double wavelength_nm,
                                  ocs_de_curve** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new ocs_de_curve{
        ocs::parse_de_curve_csv(std::string_view(text, size), label ? label : "", wavelength_nm)};
  });
}

ocs_status ocs_de_curve_from_arrays(const double* dark_cps, const double* de, size_t count, const char* label,
                                    double wavelength_nm, ocs_de_curve** out) {
  return guarded([&] {
    need(out, "out");
    ocs::DECurve curve;
    curve.label = label ? label : "";
    curve.wavelength_nm = wavelength_nm;
    if (count) {
      need(dark_cps, "dark_cps");
      need(de, "de");
    }
    for (size_t i = 0; i < count; ++i) curve.points.push_back({dark_cps[i], de[i]});
    ocs::validate(curve);
    *out = new ocs_de_curve{std::move(curve)};
  });
}

const char* ocs_de_curve_label(const ocs_de_curve* curve) { return curve ? curve->value.label.c_str() : ""; }

ocs_status ocs_de_at_dark_rate(const ocs_de_curve* curve, double dark_rate_cps, int axis, double* out) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    ocs::require(axis == OCS_DARK_AXIS_LOG || axis == OCS_DARK_AXIS_LINEAR, "unknown interpolation axis");
    *out = ocs::de_at_dark_rate(curve->value, dark_rate_cps,
                                axis == OCS_DARK_AXIS_LOG ? ocs::DarkRateAxis::Log : ocs::DarkRateAxis::Linear);
  });
}

void ocs_de_curve_destroy(ocs_de_curve* curve) { delete curve; }

ocs_status ocs_enhancement_factor(double de_after, double de_before, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ocs::enhancement_factor(de_after, de_before);
  });
}

/* Design optimizer */

ocs_status ocs_design_variable_parse(const char* name, int* out) {
  return guarded([&] {
    need(out, "out");
    *out = static_cast<int>(ocs::parse_design_variable(text_arg(name, "name")));
  });
}

const char* ocs_design_variable_name(int variable) {
  if (variable < OCS_VAR_CAVITY_THICKNESS_NM || variable > OCS_VAR_SUBSTRATE_THICKNESS_UM) return "";
  return ocs::to_string(static_cast<ocs::DesignVariable>(variable)).data();
}

ocs_status ocs_optimize_layer(const ocs_stack* stack, const char* variable_label, int objective,
                              const char* nanowire_label, const ocs_design_space* space, double wavelength_nm,
                              ocs_design_result** out) {
  return guarded([&] {
    need(stack, "stack");
    need(space, "space");
    need(out, "out");
    ocs::require(objective == OCS_OBJECTIVE_LAYER_ABSORPTANCE || objective == OCS_OBJECTIVE_ANTIREFLECTION,
                 "unknown layer objective");
    const auto obj = objective == OCS_OBJECTIVE_LAYER_ABSORPTANCE ? ocs::LayerObjective::LayerAbsorptance
                                                                  : ocs::LayerObjective::Antireflection;
    *out = new ocs_design_result{ocs::optimize_layer(stack->value, text_arg(variable_label, "variable_label"), obj,
                                                     nanowire_label ? nanowire_label : "", to_core(*space),
                                                     wavelength_nm)};
  });
}

ocs_status ocs_optimize_substrate(const ocs_beam_geometry* geom, const ocs_design_space* space,
                                  ocs_design_result** out) {
  return guarded([&] {
    need(geom, "geom");
    need(space, "space");
    need(out, "out");
    *out = new ocs_design_result{ocs::optimize_substrate(to_core(*geom), to_core(*space))};
  });
}

ocs_status ocs_optimize_device(const ocs_stack* cavity, const char* cavity_label, const char* nanowire_label,
                               const ocs_stack* ar_stack, const char* ar_label,
                               const ocs_design_space* cavity_space, const ocs_design_space* ar_space,
                               double wavelength_nm, ocs_joint_design* out) {
  return guarded([&] {
    need(cavity, "cavity");
    need(ar_stack, "ar_stack");
    need(cavity_space, "cavity_space");
    need(ar_space, "ar_space");
    need(out, "out");
    const auto r = ocs::optimize_device(cavity->value, text_arg(cavity_label, "cavity_label"),
                                        text_arg(nanowire_label, "nanowire_label"), ar_stack->value,
                                        text_arg(ar_label, "ar_label"), to_core(*cavity_space),
                                        to_core(*ar_space), wavelength_nm);
    *out = ocs_joint_design{r.argmax[0], r.argmax[1], r.objective_value, r.sweeps, r.converged ? 1 : 0};
  });
}

double ocs_design_argmax(const ocs_design_result* result) { return result ? result->value.argmax : 0.0; }
double ocs_design_objective(const ocs_design_result* result) {
  return result ? result->value.objective_value : 0.0;
}
int ocs_design_snapped(const ocs_design_result* result) { return result && result->value.snapped ? 1 : 0; }
size_t ocs_design_trace_size(const ocs_design_result* result) { return result ? result->value.trace.size() : 0; }

ocs_status ocs_design_trace_at(const ocs_design_result* result, size_t i, double* candidate, double* value) {
  return guarded([&] {
    need(result, "result");
    ocs::require(i < result->value.trace.size(), "trace index out of range");
    if (candidate) *candidate = result->value.trace[i].candidate;
    if (value) *value = result->value.trace[i].value;
  });
}

ocs_status ocs_design_trace_csv(const ocs_design_result* result, ocs_text** out) {
  return guarded([&] {
    need(result, "result");
    emit(ocs::design_trace_csv(result->value), out);
  });
}

ocs_status ocs_design_result_csv(const ocs_design_result* result, int variable, ocs_text** out) {
  return guarded([&] {
    need(result, "result");
    ocs_design_space probe{variable, 0.0, 1.0, 0.0};
    emit(ocs::design_result_csv(to_core(probe).variable, result->value), out);
  });
}

void ocs_design_result_destroy(ocs_design_result* result) { delete result; }

/* Config and reports */

ocs_status ocs_config_parse(const char* json, size_t size, ocs_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto cfg = std::make_unique<ocs_config>();
    cfg->value = ocs::parse_run_config(std::string_view(json, size));
    cfg->digest = cfg->value.digest();
    *out = cfg.release();
  });
}

void ocs_config_destroy(ocs_config* config) { delete config; }

int ocs_config_has_stack(const ocs_config* config) { return config && config->value.stack ? 1 : 0; }
int ocs_config_has_ar_stack(const ocs_config* config) { return config && config->value.ar_stack ? 1 : 0; }

ocs_status ocs_config_stack(const ocs_config* config, ocs_stack** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    ocs::require(config->value.stack.has_value(), "config has no stack");
    *out = new ocs_stack{config->value.stack->stack};
  });
}

ocs_status ocs_config_ar_stack(const ocs_config* config, ocs_stack** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    ocs::require(config->value.ar_stack.has_value(), "config has no ar_stack");
    *out = new ocs_stack{config->value.ar_stack->stack};
  });
}

const char* ocs_config_stack_tag(const ocs_config* config, const char* tag) {
  return config && config->value.stack ? stack_tag(*config->value.stack, tag) : "";
}

const char* ocs_config_ar_stack_tag(const ocs_config* config, const char* tag) {
  return config && config->value.ar_stack ? stack_tag(*config->value.ar_stack, tag) : "";
}

void ocs_config_beam(const ocs_config* config, ocs_beam_geometry* out) {
  if (!out) return;
  *out = config ? to_c(config->value.beam) : to_c(ocs::BeamGeometry{});
}

double ocs_config_fiber_index(const ocs_config* config) { return config ? config->value.fiber_index : 1.45; }

ocs_status ocs_config_material(const ocs_config* config, const char* name, ocs_index* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto it = config->value.materials.find(text_arg(name, "name"));
    ocs::require(it != config->value.materials.end(), std::string("unknown material '") + name + "'");
    *out = to_c(it->second);
  });
}

ocs_status ocs_config_resolved_json(const ocs_config* config, ocs_text** out) {
  return guarded([&] {
    need(config, "config");
    emit(config->value.resolved_json(), out);
  });
}

const char* ocs_config_digest(const ocs_config* config) { return config ? config->digest.c_str() : ""; }

const char* ocs_config_output_path(const ocs_config* config) {
  return config ? config->value.output_path.c_str() : "";
}

ocs_status ocs_sha256_hex(const void* data, size_t size, char* out) {
  return guarded([&] {
    need(out, "out");
    if (size) need(data, "data");
    const auto hex = ocs::sha256_hex(std::string_view(static_cast<const char*>(data), size));
    std::copy(hex.begin(), hex.end(), out);
    out[hex.size()] = '\0';
  });
}

const char* ocs_shipped_materials_json(void) { return ocs::shipped_materials_json().data(); }

ocs_status ocs_run_report_create(const char* command, ocs_run_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ocs_run_report{ocs::RunReport(text_arg(command, "command")), {}};
  });
}

void ocs_run_report_destroy(ocs_run_report* report) { delete report; }

ocs_status ocs_run_report_set_config(ocs_run_report* report, const ocs_config* config) {
  return guarded([&] {
    need(report, "report");
    need(config, "config");
    report->value.set_config_json(config->value.resolved_json());
  });
}

ocs_status ocs_run_report_add_input(ocs_run_report* report, const char* key, const char* value) {
  return guarded([&] {
    need(report, "report");
    report->value.add_input(text_arg(key, "key"), text_arg(value, "value"));
  });
}

ocs_status ocs_run_report_add_input_number(ocs_run_report* report, const char* key, double value) {
  return guarded([&] {
    need(report, "report");
    report->value.add_input(text_arg(key, "key"), value);
  });
}

ocs_status ocs_run_report_add_output(ocs_run_report* report, const char* path) {
  return guarded([&] {
    need(report, "report");
    report->value.add_output(text_arg(path, "path"));
  });
}

ocs_status ocs_run_report_add_warning(ocs_run_report* report, const char* text) {
  return guarded([&] {
    need(report, "report");
    report->value.add_warning(text_arg(text, "text"));
  });
}

const char* ocs_run_report_digest(ocs_run_report* report) {
  if (!report) return "";
  try {
    report->digest = report->value.inputs_digest();
  } catch (...) {
    report->digest.clear();
  }
  return report->digest.c_str();
}

ocs_status ocs_run_report_json(const ocs_run_report* report, ocs_text** out) {
  return guarded([&] {
    need(report, "report");
    emit(report->value.to_json(), out);
  });
}

}  // extern "C"
