/*
 * ocsnspd: design and analysis of fiber-coupled optical-cavity SNSPDs.
 *
 * Plain C interface over the C++ core. Objects are opaque handles created by
 * *_create / *_parse / *_synthesize functions and released with the matching
 * *_destroy. Every fallible call returns an ocs_status; on failure the
 * thread-local message from ocs_last_error_message() explains it and output
 * parameters are left untouched.
 *
 * Units: stack wavelengths and thicknesses in nm, beam and substrate lengths
 * in um, rates in counts (or photons) per second.
 */
#ifndef OCSNSPD_H
#define OCSNSPD_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(OCS_BUILDING_LIBRARY)
#    define OCS_API __declspec(dllexport)
#  else
#    define OCS_API __declspec(dllimport)
#  endif
#else
#  define OCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ocs_status {
  OCS_OK = 0,
  OCS_ERR_INVALID_ARGUMENT = 1,
  OCS_ERR_UNREACHABLE_TARGET = 2,
  OCS_ERR_NO_FRINGE = 3,
  OCS_ERR_INSUFFICIENT_DATA = 4,
  OCS_ERR_EXTRAPOLATION_REFUSED = 5,
  OCS_ERR_UNDEFINED_RATIO = 6,
  OCS_ERR_NON_FINITE = 7,
  OCS_ERR_PARSE = 8,
  OCS_ERR_IO = 9,
  OCS_ERR_INTERNAL = 10
} ocs_status;

OCS_API const char* ocs_version(void);
OCS_API const char* ocs_status_name(ocs_status status);
/* Message for the most recent failure on the calling thread ("" if none). */
OCS_API const char* ocs_last_error_message(void);

/* Owned text buffer (CSV, JSON). NUL-terminated. */
typedef struct ocs_text ocs_text;
OCS_API const char* ocs_text_data(const ocs_text* text);
OCS_API size_t ocs_text_size(const ocs_text* text);
OCS_API void ocs_text_destroy(ocs_text* text);

/* ------------------------------------------------------------------ */
/* Stack optics                                                        */
/* ------------------------------------------------------------------ */

typedef struct ocs_index {
  double n;
  double k;
} ocs_index;

typedef struct ocs_stack ocs_stack;

typedef struct ocs_response {
  double wavelength_nm;
  double reflectance;
  double transmittance;
  double absorptance_total;
} ocs_response;

OCS_API ocs_status ocs_stack_create(ocs_index incident, ocs_index exit, ocs_stack** out);
OCS_API ocs_status ocs_stack_clone(const ocs_stack* stack, ocs_stack** out);
OCS_API void ocs_stack_destroy(ocs_stack* stack);
OCS_API ocs_status ocs_stack_add_layer(ocs_stack* stack, const char* label, double thickness_nm,
                                       ocs_index index);
OCS_API ocs_status ocs_stack_set_thickness(ocs_stack* stack, size_t layer, double thickness_nm);
OCS_API size_t ocs_stack_layer_count(const ocs_stack* stack);
/* The returned label lives as long as the stack is not modified. */
OCS_API ocs_status ocs_stack_layer_label(const ocs_stack* stack, size_t layer, const char** label);
OCS_API ocs_status ocs_stack_find_layer(const ocs_stack* stack, const char* label, size_t* layer);

/* Fills `per_layer` (absorptance per layer) when non-NULL; it must hold
 * ocs_stack_layer_count() entries, given as `per_layer_capacity`. */
OCS_API ocs_status ocs_stack_response(const ocs_stack* stack, double wavelength_nm, ocs_response* out,
                                      double* per_layer, size_t per_layer_capacity);
OCS_API ocs_status ocs_stack_spectrum_csv(const ocs_stack* stack, double min_nm, double max_nm,
                                          double step_nm, ocs_text** out);

OCS_API ocs_status ocs_fit_extinction(ocs_index base, double film_thickness_nm, ocs_index substrate,
                                      double target_absorptance, double wavelength_nm, ocs_index* out);
OCS_API ocs_status ocs_quarter_wave_thickness(ocs_index index, double wavelength_nm, double* out_nm);

/* ------------------------------------------------------------------ */
/* Beam coupling                                                       */
/* ------------------------------------------------------------------ */

typedef enum ocs_aperture_kind {
  OCS_APERTURE_PAPER_DISK = 0,
  OCS_APERTURE_DISK = 1,
  OCS_APERTURE_SQUARE = 2
} ocs_aperture_kind;

typedef enum ocs_path_convention { OCS_PATH_OPTICAL = 0, OCS_PATH_REDUCED = 1 } ocs_path_convention;

typedef struct ocs_beam_geometry {
  double wavelength_um;
  double mfd_um;
  double l_air_um;
  double l_sub_um;
  double n_sub;
  int aperture_kind; /* ocs_aperture_kind */
  double aperture_size_um;
  int path_convention; /* ocs_path_convention */
} ocs_beam_geometry;

typedef struct ocs_coupling_point {
  double l_sub_um;
  double l_opt_um;
  double eta;
  double eta_normalized;
} ocs_coupling_point;

/* 1.55 um, 10.6 um MFD, 20 um air gap, 45 um substrate, n = 1.7, 15 um nanowire-area disk. */
OCS_API void ocs_beam_geometry_default(ocs_beam_geometry* geom);
OCS_API ocs_status ocs_spot_radius(double w0_um, double wavelength_um, double x_um, double* out_um);
OCS_API ocs_status ocs_optical_path_length(const ocs_beam_geometry* geom, double* out_um);
OCS_API ocs_status ocs_coupled_fraction(const ocs_beam_geometry* geom, double* out);
/* `out` must hold `count` points. */
OCS_API ocs_status ocs_coupling_curve(const ocs_beam_geometry* geom, const double* substrate_um, size_t count,
                                      ocs_coupling_point* out);
OCS_API ocs_status ocs_coupling_curve_csv(const ocs_beam_geometry* geom, const double* substrate_um,
                                          size_t count, ocs_text** out);

/* ------------------------------------------------------------------ */
/* Interferometry                                                      */
/* ------------------------------------------------------------------ */

typedef struct ocs_surface_model {
  double r_re[3]; /* fiber end, substrate rear, substrate front */
  double r_im[3];
  double l_air_um;
  double l_sub_um;
  double n_sub;
} ocs_surface_model;

typedef struct ocs_spectrum ocs_spectrum;
typedef struct ocs_fringe_analysis ocs_fringe_analysis;

typedef struct ocs_fringe_component {
  double delta_lambda_nm;
  double optical_distance_um;
  double strength;
} ocs_fringe_component;

/* Fresnel amplitudes for the fiber/air/substrate geometry; `cavity` (may be
 * NULL for a bare substrate) supplies the front-face reflection. */
OCS_API ocs_status ocs_surface_model_default(double l_air_um, double l_sub_um, double n_sub, double fiber_index,
                                             const ocs_stack* cavity, double wavelength_nm,
                                             ocs_surface_model* out);
OCS_API ocs_status ocs_spectrum_synthesize(const ocs_surface_model* model, double min_nm, double max_nm,
                                           double step_nm, ocs_spectrum** out);
OCS_API ocs_status ocs_spectrum_from_arrays(const double* wavelength_nm, const double* power, size_t count,
                                            ocs_spectrum** out);
OCS_API ocs_status ocs_spectrum_parse_csv(const char* text, size_t size, ocs_spectrum** out);
OCS_API size_t ocs_spectrum_size(const ocs_spectrum* spectrum);
OCS_API ocs_status ocs_spectrum_sample(const ocs_spectrum* spectrum, size_t i, double* wavelength_nm,
                                       double* power);
OCS_API ocs_status ocs_spectrum_csv(const ocs_spectrum* spectrum, ocs_text** out);
OCS_API void ocs_spectrum_destroy(ocs_spectrum* spectrum);

OCS_API ocs_status ocs_analyze_fringes(const ocs_spectrum* spectrum, ocs_fringe_analysis** out);
OCS_API size_t ocs_fringe_count(const ocs_fringe_analysis* analysis);
OCS_API ocs_status ocs_fringe_component_at(const ocs_fringe_analysis* analysis, size_t i,
                                           ocs_fringe_component* out);
OCS_API double ocs_fringe_mean_lambda_nm(const ocs_fringe_analysis* analysis);
OCS_API ocs_status ocs_fringe_report_csv(const ocs_fringe_analysis* analysis, ocs_text** out);
OCS_API void ocs_fringe_analysis_destroy(ocs_fringe_analysis* analysis);

OCS_API ocs_status ocs_thickness_from_fringe(double delta_lambda_nm, double mean_lambda_nm, double n,
                                             double* out_um);

/* ------------------------------------------------------------------ */
/* Detector model                                                      */
/* ------------------------------------------------------------------ */

typedef struct ocs_de_budget {
  double coupling;
  double absorptance;
  double intrinsic;
  double wavelength_nm;
} ocs_de_budget;

typedef struct ocs_count_measurement {
  double output_cps;
  double dark_cps;
  double flux_cps;
} ocs_count_measurement;

typedef struct ocs_count_efficiency {
  double de;
  double de_raw;
  int subtracted;
  int below_dark;
} ocs_count_efficiency;

typedef enum ocs_dark_axis { OCS_DARK_AXIS_LOG = 0, OCS_DARK_AXIS_LINEAR = 1 } ocs_dark_axis;

typedef struct ocs_de_curve ocs_de_curve;

OCS_API ocs_status ocs_system_de(const ocs_de_budget* budget, double* out);
OCS_API ocs_status ocs_infer_intrinsic(double coupling, double absorptance, double system_de, double* out);
OCS_API ocs_status ocs_de_from_counts(const ocs_count_measurement* m, int subtract_dark,
                                      ocs_count_efficiency* out);
/* Parses `output_cps,dark_cps,flux_cps` rows and returns the per-row report CSV. */
OCS_API ocs_status ocs_counts_report_csv(const char* text, size_t size, int subtract_dark, ocs_text** out);

OCS_API ocs_status ocs_de_curve_parse_csv(const char* text, size_t size, const char* label, double wavelength_nm,
                                          ocs_de_curve** out);
OCS_API ocs_status ocs_de_curve_from_arrays(const double* dark_cps, const double* de, size_t count,
                                            const char* label, double wavelength_nm, ocs_de_curve** out);
OCS_API const char* ocs_de_curve_label(const ocs_de_curve* curve);
OCS_API ocs_status ocs_de_at_dark_rate(const ocs_de_curve* curve, double dark_rate_cps, int axis, double* out);
OCS_API void ocs_de_curve_destroy(ocs_de_curve* curve);

OCS_API ocs_status ocs_enhancement_factor(double de_after, double de_before, double* out);

/* ------------------------------------------------------------------ */
/* Design optimizer                                                    */
/* ------------------------------------------------------------------ */

typedef enum ocs_design_variable {
  OCS_VAR_CAVITY_THICKNESS_NM = 0,
  OCS_VAR_AR_THICKNESS_NM = 1,
  OCS_VAR_SUBSTRATE_THICKNESS_UM = 2
} ocs_design_variable;

typedef enum ocs_layer_objective {
  OCS_OBJECTIVE_LAYER_ABSORPTANCE = 0,
  OCS_OBJECTIVE_ANTIREFLECTION = 1
} ocs_layer_objective;

typedef struct ocs_design_space {
  int variable; /* ocs_design_variable */
  double lower;
  double upper;
  double granularity;
} ocs_design_space;

typedef struct ocs_design_result ocs_design_result;

typedef struct ocs_joint_design {
  double cavity_thickness_nm;
  double ar_thickness_nm;
  double objective;
  int sweeps;
  int converged;
} ocs_joint_design;

OCS_API ocs_status ocs_design_variable_parse(const char* name, int* out);
OCS_API const char* ocs_design_variable_name(int variable);

/* `nanowire_label` is ignored for OCS_OBJECTIVE_ANTIREFLECTION. */
OCS_API ocs_status ocs_optimize_layer(const ocs_stack* stack, const char* variable_label, int objective,
                                      const char* nanowire_label, const ocs_design_space* space,
                                      double wavelength_nm, ocs_design_result** out);
OCS_API ocs_status ocs_optimize_substrate(const ocs_beam_geometry* geom, const ocs_design_space* space,
                                          ocs_design_result** out);
OCS_API ocs_status ocs_optimize_device(const ocs_stack* cavity, const char* cavity_label,
                                       const char* nanowire_label, const ocs_stack* ar_stack,
                                       const char* ar_label, const ocs_design_space* cavity_space,
                                       const ocs_design_space* ar_space, double wavelength_nm,
                                       ocs_joint_design* out);

OCS_API double ocs_design_argmax(const ocs_design_result* result);
OCS_API double ocs_design_objective(const ocs_design_result* result);
OCS_API int ocs_design_snapped(const ocs_design_result* result);
OCS_API size_t ocs_design_trace_size(const ocs_design_result* result);
OCS_API ocs_status ocs_design_trace_at(const ocs_design_result* result, size_t i, double* candidate,
                                       double* value);
OCS_API ocs_status ocs_design_trace_csv(const ocs_design_result* result, ocs_text** out);
OCS_API ocs_status ocs_design_result_csv(const ocs_design_result* result, int variable, ocs_text** out);
OCS_API void ocs_design_result_destroy(ocs_design_result* result);

/* ------------------------------------------------------------------ */
/* Run configuration and reports                                       */
/* ------------------------------------------------------------------ */

typedef struct ocs_config ocs_config;
typedef struct ocs_run_report ocs_run_report;

/* Resolves material names against the shipped table plus the config's
 * material_defaults, fitting NbN-style extinction coefficients as needed. */
OCS_API ocs_status ocs_config_parse(const char* json, size_t size, ocs_config** out);
OCS_API void ocs_config_destroy(ocs_config* config);
OCS_API int ocs_config_has_stack(const ocs_config* config);
OCS_API int ocs_config_has_ar_stack(const ocs_config* config);
OCS_API ocs_status ocs_config_stack(const ocs_config* config, ocs_stack** out);
OCS_API ocs_status ocs_config_ar_stack(const ocs_config* config, ocs_stack** out);
/* Tag is one of "nanowire", "cavity", "ar"; "" when the config does not set it. */
OCS_API const char* ocs_config_stack_tag(const ocs_config* config, const char* tag);
OCS_API const char* ocs_config_ar_stack_tag(const ocs_config* config, const char* tag);
OCS_API void ocs_config_beam(const ocs_config* config, ocs_beam_geometry* out);
OCS_API double ocs_config_fiber_index(const ocs_config* config);
/* "" when the config does not name an output file. */
OCS_API const char* ocs_config_output_path(const ocs_config* config);
OCS_API ocs_status ocs_config_material(const ocs_config* config, const char* name, ocs_index* out);
OCS_API ocs_status ocs_config_resolved_json(const ocs_config* config, ocs_text** out);
/* 64 hex characters. */
OCS_API const char* ocs_config_digest(const ocs_config* config);
OCS_API const char* ocs_shipped_materials_json(void);
/* Lowercase hex SHA-256 of `size` bytes; `out` must hold 65 chars. */
OCS_API ocs_status ocs_sha256_hex(const void* data, size_t size, char* out);

OCS_API ocs_status ocs_run_report_create(const char* command, ocs_run_report** out);
OCS_API void ocs_run_report_destroy(ocs_run_report* report);
OCS_API ocs_status ocs_run_report_set_config(ocs_run_report* report, const ocs_config* config);
OCS_API ocs_status ocs_run_report_add_input(ocs_run_report* report, const char* key, const char* value);
OCS_API ocs_status ocs_run_report_add_input_number(ocs_run_report* report, const char* key, double value);
OCS_API ocs_status ocs_run_report_add_output(ocs_run_report* report, const char* path);
OCS_API ocs_status ocs_run_report_add_warning(ocs_run_report* report, const char* text);
/* 64 hex characters; valid until the report is modified or destroyed. */
OCS_API const char* ocs_run_report_digest(ocs_run_report* report);
OCS_API ocs_status ocs_run_report_json(const ocs_run_report* report, ocs_text** out);

#ifdef __cplusplus
}
#endif

#endif /* OCSNSPD_H */
