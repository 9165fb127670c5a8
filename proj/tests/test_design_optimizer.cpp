#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "core/beam_coupling.hpp"
#include "core/design_optimizer.hpp"
#include "core/error.hpp"
#include "core/stack_optics.hpp"

using namespace ocs;

namespace {

Stack cavity() {
  const auto nbn = fit_extinction({5.5, 0.0}, 4.0, {1.7, 0.0}, 0.32, 1550.0);
  return Stack{{1.7, 0.0},
               {{"NbN", 4.0, nbn}, {"SiO", 250.0, {1.55, 0.0}}, {"Au", 100.0, {0.55, 10.7}}},
               {1.0, 0.0}};
}

bool on_lattice(double x, double g) { return std::abs(x / g - std::round(x / g)) < 1e-9; }

}  // namespace

TEST(DesignOptimizer, CavityMatchesBruteForceScan) {
  const Stack s = cavity();
  const auto r = optimize_layer(s, "SiO", LayerObjective::LayerAbsorptance, "NbN",
                                {DesignVariable::CavityThicknessNm, 50.0, 600.0, 0.0}, 1550.0);
  Stack w = s;
  double best_x = 0, best_v = -1;
  for (int i = 0; i <= 5500; ++i) {
    const double x = 50.0 + 0.1 * i;
    w.layers[1].thickness_nm = x;
    const double v = stack_response(w, 1550.0).A_per_layer[0];
    if (v > best_v) best_v = v, best_x = x;
  }
  EXPECT_NEAR(r.argmax, best_x, 1.0);
  EXPECT_NEAR(r.objective_value, best_v, 1e-4);
  EXPECT_GE(r.objective_value, best_v - 1e-9);
  EXPECT_FALSE(r.snapped);
}

TEST(DesignOptimizer, AntireflectionFindsQuarterWave) {
  const ComplexIndex ar{std::sqrt(1.7), 0.0};
  const Stack s{{1.0, 0.0}, {{"AR", 200.0, ar}}, {1.7, 0.0}};
  const auto r = optimize_layer(s, "AR", LayerObjective::Antireflection, "",
                                {DesignVariable::ArThicknessNm, 200.0, 400.0, 0.0}, 1550.0);
  EXPECT_NEAR(r.argmax, quarter_wave_thickness(ar, 1550.0), 0.05);
  EXPECT_NEAR(r.objective_value, 1.0, 1e-9);
}

TEST(DesignOptimizer, SubstrateSnapsToLowerBound) {
  const auto r = optimize_substrate(BeamGeometry{}, {DesignVariable::SubstrateThicknessUm, 45.0, 400.0, 5.0});
  EXPECT_TRUE(r.snapped);
  EXPECT_DOUBLE_EQ(r.argmax, 45.0);
  EXPECT_TRUE(on_lattice(r.argmax, 5.0));
  EXPECT_NEAR(r.objective_value, 0.98402, 1e-5);

  const auto off = optimize_substrate(BeamGeometry{}, {DesignVariable::SubstrateThicknessUm, 43.0, 400.0, 5.0});
  EXPECT_DOUBLE_EQ(off.argmax, 45.0);
}

TEST(DesignOptimizer, InvariantsProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> centre(-5.0, 5.0), width(0.5, 10.0), lo(-10.0, 0.0), span(1.0, 20.0);
  std::uniform_int_distribution<int> gran(0, 3);
  const double grans[] = {0.0, 0.25, 0.5, 1.0};
  for (int trial = 0; trial < 300; ++trial) {
    const double c = centre(rng), w = width(rng);
    auto f = [&](double x) { return 1.0 / (1.0 + (x - c) * (x - c) / (w * w)); };
    DesignSpace sp{DesignVariable::CavityThicknessNm, lo(rng), 0.0, grans[gran(rng)]};
    sp.upper = sp.lower + span(rng);
    if (sp.granularity > 0.0 && std::floor(sp.upper / sp.granularity) * sp.granularity < sp.lower) continue;
    const auto r = maximize(f, sp);
    EXPECT_GE(r.argmax, sp.lower - 1e-12);
    EXPECT_LE(r.argmax, sp.upper + 1e-12);
    EXPECT_DOUBLE_EQ(r.objective_value, f(r.argmax));
    ASSERT_FALSE(r.trace.empty());
    for (const auto& p : r.trace) {
      EXPECT_EQ(p.value, f(p.candidate));
      // Lattice-aligned probes are attainable designs, so none beats the answer.
      if (sp.granularity == 0.0 || on_lattice(p.candidate, sp.granularity)) {
        EXPECT_LE(p.value, r.objective_value + 1e-15);
      }
    }
    if (sp.granularity > 0.0) {
      EXPECT_TRUE(on_lattice(r.argmax, sp.granularity));
    } else {
      const double expect = std::clamp(c, sp.lower, sp.upper);
      EXPECT_NEAR(r.argmax, expect, 0.02);
    }
  }
}

TEST(DesignOptimizer, TiesGoToSmallestCandidate) {
  const auto r = maximize([](double) { return 0.5; }, {DesignVariable::CavityThicknessNm, 10.0, 20.0, 0.0});
  EXPECT_DOUBLE_EQ(r.argmax, 10.0);
}

TEST(DesignOptimizer, Errors) {
  auto f = [](double x) { return -x * x; };
  EXPECT_THROW(maximize(f, {DesignVariable::CavityThicknessNm, 5.0, 1.0, 0.0}), Error);
  EXPECT_THROW(maximize(f, {DesignVariable::CavityThicknessNm, 1.0, 1.0, 0.0}), Error);
  EXPECT_THROW(maximize(f, {DesignVariable::CavityThicknessNm, 1.1, 1.9, 1.0}), Error);
  EXPECT_THROW(maximize(f, {DesignVariable::CavityThicknessNm, 0.0, 1.0, -1.0}), Error);
  try {
    maximize([](double x) { return x > 0.5 ? NAN : x; }, {DesignVariable::CavityThicknessNm, 0.0, 1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
  EXPECT_THROW(optimize_layer(cavity(), "SiO", LayerObjective::LayerAbsorptance, "SiO",
                              {DesignVariable::CavityThicknessNm, 50.0, 600.0, 0.0}, 1550.0),
               Error);
  EXPECT_THROW(optimize_layer(cavity(), "missing", LayerObjective::Antireflection, "",
                              {DesignVariable::CavityThicknessNm, 50.0, 600.0, 0.0}, 1550.0),
               Error);
  EXPECT_THROW(parse_design_variable("thickness"), Error);
  EXPECT_EQ(parse_design_variable("ar_thickness_nm"), DesignVariable::ArThicknessNm);
}

TEST(DesignOptimizer, JointDeviceDesign) {
  const Stack ar{{1.0, 0.0}, {{"AR", 250.0, {1.34, 0.0}}}, {1.7, 0.0}};
  const auto r = optimize_device(cavity(), "SiO", "NbN", ar, "AR", {DesignVariable::CavityThicknessNm, 50, 600, 0},
                                 {DesignVariable::ArThicknessNm, 50, 600, 0}, 1550.0);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.sweeps, kMaxCoordinateSweeps);
  ASSERT_EQ(r.argmax.size(), 2u);
  EXPECT_NEAR(r.argmax[1], quarter_wave_thickness({1.34, 0.0}, 1550.0), 0.5);
  // Separable objective: joint optimum equals the product of the single optima.
  const auto cav = optimize_layer(cavity(), "SiO", LayerObjective::LayerAbsorptance, "NbN",
                                  {DesignVariable::CavityThicknessNm, 50, 600, 0}, 1550.0);
  const auto a = optimize_layer(ar, "AR", LayerObjective::Antireflection, "",
                                {DesignVariable::ArThicknessNm, 50, 600, 0}, 1550.0);
  EXPECT_NEAR(r.objective_value, cav.objective_value * a.objective_value, 1e-8);
}
