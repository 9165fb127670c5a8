// Exercises the shared library through its C header only.
#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "ocsnspd/ocsnspd.h"

namespace {

ocs_stack* make_cavity(double sio_nm) {
  ocs_index nbn;
  EXPECT_EQ(ocs_fit_extinction({5.5, 0.0}, 4.0, {1.7, 0.0}, 0.32, 1550.0, &nbn), OCS_OK);
  ocs_stack* s = nullptr;
  EXPECT_EQ(ocs_stack_create({1.7, 0.0}, {1.0, 0.0}, &s), OCS_OK);
  EXPECT_EQ(ocs_stack_add_layer(s, "NbN", 4.0, nbn), OCS_OK);
  EXPECT_EQ(ocs_stack_add_layer(s, "SiO", sio_nm, {1.55, 0.0}), OCS_OK);
  EXPECT_EQ(ocs_stack_add_layer(s, "Au", 100.0, {0.55, 10.7}), OCS_OK);
  return s;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(ocs_version(), "1.0.0");
  EXPECT_STREQ(ocs_status_name(OCS_ERR_NO_FRINGE), "no-fringe");
  EXPECT_STREQ(ocs_status_name(OCS_OK), "ok");
}

TEST(CApi, StackResponseAndErrors) {
  ocs_stack* s = make_cavity(250.0);
  EXPECT_EQ(ocs_stack_layer_count(s), 3u);
  ocs_response r;
  double per[3];
  ASSERT_EQ(ocs_stack_response(s, 1550.0, &r, per, 3), OCS_OK);
  EXPECT_NEAR(r.reflectance + r.transmittance + per[0] + per[1] + per[2], 1.0, 1e-12);
  EXPECT_GT(per[0] / 0.32, 2.0);
  EXPECT_EQ(ocs_stack_response(s, 1550.0, &r, per, 2), OCS_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(ocs_last_error_message()).find("too small"), std::string::npos);

  size_t idx = 99;
  EXPECT_EQ(ocs_stack_find_layer(s, "SiO", &idx), OCS_OK);
  EXPECT_EQ(idx, 1u);
  EXPECT_EQ(ocs_stack_find_layer(s, "nope", &idx), OCS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(idx, 1u);  // untouched on failure
  const char* label = nullptr;
  EXPECT_EQ(ocs_stack_layer_label(s, 2, &label), OCS_OK);
  EXPECT_STREQ(label, "Au");
  EXPECT_EQ(ocs_stack_add_layer(s, "bad", -1.0, {1.5, 0.0}), OCS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ocs_stack_response(nullptr, 1550.0, &r, nullptr, 0), OCS_ERR_INVALID_ARGUMENT);

  ocs_stack* copy = nullptr;
  ASSERT_EQ(ocs_stack_clone(s, &copy), OCS_OK);
  ASSERT_EQ(ocs_stack_set_thickness(copy, 1, 300.0), OCS_OK);
  ocs_response r2;
  ASSERT_EQ(ocs_stack_response(copy, 1550.0, &r2, nullptr, 0), OCS_OK);
  EXPECT_NE(r.reflectance, r2.reflectance);

  ocs_text* csv = nullptr;
  ASSERT_EQ(ocs_stack_spectrum_csv(s, 1500, 1600, 50, &csv), OCS_OK);
  EXPECT_EQ(std::string(ocs_text_data(csv)).substr(0, 41), "wavelength_nm,R,T,A_total,A_NbN,A_SiO,A_A");
  EXPECT_EQ(ocs_text_size(csv), std::strlen(ocs_text_data(csv)));
  ocs_text_destroy(csv);
  ocs_stack_destroy(copy);
  ocs_stack_destroy(s);
}

TEST(CApi, ErrorMessageIsThreadLocal) {
  ocs_stack* s = nullptr;
  EXPECT_EQ(ocs_stack_create({1.0, 0.0}, {1.0, 0.0}, &s), OCS_OK);
  ocs_response r;
  EXPECT_EQ(ocs_stack_response(s, 1550.0, &r, nullptr, 0), OCS_ERR_INVALID_ARGUMENT);
  const std::string mine = ocs_last_error_message();
  EXPECT_FALSE(mine.empty());
  std::string other = "unset";
  std::thread([&] { other = ocs_last_error_message(); }).join();
  EXPECT_EQ(other, "");
  EXPECT_EQ(ocs_last_error_message(), mine);
  ocs_stack_destroy(s);
}

TEST(CApi, BeamCoupling) {
  ocs_beam_geometry g;
  ocs_beam_geometry_default(&g);
  double eta = 0, l = 0;
  ASSERT_EQ(ocs_coupled_fraction(&g, &eta), OCS_OK);
  ASSERT_EQ(ocs_optical_path_length(&g, &l), OCS_OK);
  EXPECT_NEAR(eta, 0.984, 0.002);
  EXPECT_DOUBLE_EQ(l, 96.5);
  const double t[] = {45, 100, 200, 400};
  ocs_coupling_point pts[4];
  ASSERT_EQ(ocs_coupling_curve(&g, t, 4, pts), OCS_OK);
  EXPECT_NEAR(pts[3].eta, 0.100, 0.002);
  g.aperture_kind = 7;
  EXPECT_EQ(ocs_coupled_fraction(&g, &eta), OCS_ERR_INVALID_ARGUMENT);
}

TEST(CApi, FringeRoundTrip) {
  ocs_surface_model m;
  ASSERT_EQ(ocs_surface_model_default(20.0, 45.0, 1.7, 1.45, nullptr, 1550.0, &m), OCS_OK);
  ocs_spectrum* s = nullptr;
  ASSERT_EQ(ocs_spectrum_synthesize(&m, 1500.0, 1600.0, 0.02, &s), OCS_OK);
  EXPECT_EQ(ocs_spectrum_size(s), 5001u);
  ocs_fringe_analysis* a = nullptr;
  ASSERT_EQ(ocs_analyze_fringes(s, &a), OCS_OK);
  bool found = false;
  for (size_t i = 0; i < ocs_fringe_count(a); ++i) {
    ocs_fringe_component c;
    ASSERT_EQ(ocs_fringe_component_at(a, i, &c), OCS_OK);
    double d;
    ASSERT_EQ(ocs_thickness_from_fringe(c.delta_lambda_nm, ocs_fringe_mean_lambda_nm(a), 1.7, &d), OCS_OK);
    if (std::abs(d - 45.0) < 0.9) found = true;
  }
  EXPECT_TRUE(found);
  ocs_fringe_analysis_destroy(a);
  ocs_spectrum_destroy(s);

  std::vector<double> wl, p;
  for (int i = 0; i < 100; ++i) wl.push_back(1500 + i), p.push_back(0.04);
  ASSERT_EQ(ocs_spectrum_from_arrays(wl.data(), p.data(), wl.size(), &s), OCS_OK);
  EXPECT_EQ(ocs_analyze_fringes(s, &a), OCS_ERR_NO_FRINGE);
  ocs_spectrum_destroy(s);
  ASSERT_EQ(ocs_spectrum_from_arrays(wl.data(), p.data(), 8, &s), OCS_OK);
  EXPECT_EQ(ocs_analyze_fringes(s, &a), OCS_ERR_INSUFFICIENT_DATA);
  ocs_spectrum_destroy(s);
}

TEST(CApi, DetectorModel) {
  double v;
  ASSERT_EQ(ocs_enhancement_factor(0.095, 0.025, &v), OCS_OK);
  EXPECT_EQ(v, 3.8);
  EXPECT_EQ(ocs_enhancement_factor(0.095, 0.0, &v), OCS_ERR_UNDEFINED_RATIO);
  ocs_de_budget b{0.984, 0.32, 0.0794, 1550.0};
  ASSERT_EQ(ocs_system_de(&b, &v), OCS_OK);
  EXPECT_NEAR(v, 0.025, 5e-5);
  const double dark[] = {10, 100, 1000}, de[] = {0.05, 0.08, 0.095};
  ocs_de_curve* c = nullptr;
  ASSERT_EQ(ocs_de_curve_from_arrays(dark, de, 3, "AR", 1550.0, &c), OCS_OK);
  EXPECT_STREQ(ocs_de_curve_label(c), "AR");
  EXPECT_EQ(ocs_de_at_dark_rate(c, 5000.0, OCS_DARK_AXIS_LOG, &v), OCS_ERR_EXTRAPOLATION_REFUSED);
  ASSERT_EQ(ocs_de_at_dark_rate(c, 100.0, OCS_DARK_AXIS_LINEAR, &v), OCS_OK);
  EXPECT_EQ(v, 0.08);
  ocs_de_curve_destroy(c);
  ocs_count_measurement m{1100, 100, 10000};
  ocs_count_efficiency e;
  ASSERT_EQ(ocs_de_from_counts(&m, 1, &e), OCS_OK);
  EXPECT_DOUBLE_EQ(e.de, 0.1);
  EXPECT_EQ(e.subtracted, 1);
}

TEST(CApi, DesignAndConfig) {
  const std::string json = R"({"stack": {"incident": "MgO", "layers": [{"label": "NbN", "thickness_nm": 4},
      {"label": "SiO", "thickness_nm": 250}, {"label": "Au", "thickness_nm": 100}], "exit": "air",
      "nanowire_label": "NbN", "cavity_label": "SiO"}})";
  ocs_config* cfg = nullptr;
  ASSERT_EQ(ocs_config_parse(json.data(), json.size(), &cfg), OCS_OK);
  EXPECT_EQ(std::strlen(ocs_config_digest(cfg)), 64u);
  EXPECT_STREQ(ocs_config_stack_tag(cfg, "cavity"), "SiO");
  EXPECT_EQ(ocs_config_has_ar_stack(cfg), 0);
  ocs_stack* s = nullptr;
  ASSERT_EQ(ocs_config_stack(cfg, &s), OCS_OK);
  const ocs_design_space sp{OCS_VAR_CAVITY_THICKNESS_NM, 50.0, 600.0, 0.0};
  ocs_design_result* r = nullptr;
  ASSERT_EQ(ocs_optimize_layer(s, "SiO", OCS_OBJECTIVE_LAYER_ABSORPTANCE, "NbN", &sp, 1550.0, &r), OCS_OK);
  EXPECT_NEAR(ocs_design_argmax(r), 261.5, 1.0);
  EXPECT_GT(ocs_design_trace_size(r), 65u);
  ocs_text* t = nullptr;
  ASSERT_EQ(ocs_design_result_csv(r, OCS_VAR_CAVITY_THICKNESS_NM, &t), OCS_OK);
  EXPECT_EQ(std::string(ocs_text_data(t)).rfind("variable,argmax,objective\ncavity_thickness_nm,", 0), 0u);
  ocs_text_destroy(t);
  ocs_design_result_destroy(r);
  ocs_stack_destroy(s);

  ocs_run_report* rep = nullptr;
  ASSERT_EQ(ocs_run_report_create("design", &rep), OCS_OK);
  ASSERT_EQ(ocs_run_report_set_config(rep, cfg), OCS_OK);
  const std::string d1 = ocs_run_report_digest(rep);
  ASSERT_EQ(ocs_run_report_add_input_number(rep, "lower", 50.0), OCS_OK);
  EXPECT_NE(d1, ocs_run_report_digest(rep));
  ocs_run_report_destroy(rep);
  ocs_config_destroy(cfg);

  const std::string bad = "{\"stack\": {\"layers\": []}}";
  EXPECT_EQ(ocs_config_parse(bad.data(), bad.size(), &cfg), OCS_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(ocs_last_error_message()).find("stack.layers"), std::string::npos);
  const std::string broken = "{";
  EXPECT_EQ(ocs_config_parse(broken.data(), broken.size(), &cfg), OCS_ERR_PARSE);

  char hex[65];
  ASSERT_EQ(ocs_sha256_hex("abc", 3, hex), OCS_OK);
  EXPECT_STREQ(hex, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CApi, NullHandlesAreSafe) {
  ocs_stack_destroy(nullptr);
  ocs_text_destroy(nullptr);
  ocs_config_destroy(nullptr);
  EXPECT_EQ(ocs_stack_layer_count(nullptr), 0u);
  EXPECT_STREQ(ocs_text_data(nullptr), "");
  EXPECT_EQ(ocs_fit_extinction({5.5, 0}, 4.0, {1.7, 0}, 0.32, 1550.0, nullptr), OCS_ERR_INVALID_ARGUMENT);
}
