#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/stack_optics.hpp"
#include "oracles.hpp"

using namespace ocs;

namespace {

const ComplexIndex kMgO{1.7, 0.0};
const ComplexIndex kSiO{1.55, 0.0};
const ComplexIndex kAu{0.55, 10.7};
const ComplexIndex kAir{1.0, 0.0};

Stack random_stack(std::mt19937_64& rng, bool lossless = false) {
  std::uniform_real_distribution<double> n_dist(1.0, 5.0), k_dist(0.0, 5.0), d_dist(1.0, 500.0),
      amb(1.0, 2.5), coin(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  Stack s;
  s.incident = {amb(rng), 0.0};
  s.exit = {amb(rng), 0.0};
  const int m = count(rng);
  for (int i = 0; i < m; ++i) {
    double k = lossless || coin(rng) < 0.4 ? 0.0 : k_dist(rng);
    s.layers.push_back({"L" + std::to_string(i), d_dist(rng), {n_dist(rng), k}});
  }
  return s;
}

oracle::RT oracle_response(const Stack& s, double lambda) {
  std::vector<oracle::Slab> slabs;
  for (const auto& l : s.layers) slabs.push_back({l.index.value(), l.thickness_nm});
  return oracle::response(s.incident.n, slabs, s.exit.value(), lambda);
}

Stack cavity(double sio_nm, ComplexIndex nbn) {
  return Stack{kMgO, {{"NbN", 4.0, nbn}, {"SiO", sio_nm, kSiO}, {"Au", 100.0, kAu}}, kAir};
}

}  // namespace

TEST(StackOptics, BareSubstrateMatchesFresnel) {
  Stack s{kAir, {{"gap", 100.0, kAir}}, kMgO};
  const auto r = stack_response(s, 1550.0);
  const double rf = (1.0 - 1.7) / (1.0 + 1.7);
  EXPECT_NEAR(r.R, rf * rf, 1e-14);
  EXPECT_NEAR(r.T, 1.0 - rf * rf, 1e-14);
  EXPECT_EQ(r.A_total, 0.0);
}

TEST(StackOptics, QuarterWaveZero) {
  const ComplexIndex ar{std::sqrt(1.7), 0.0};
  Stack s{kAir, {{"AR", quarter_wave_thickness(ar, 1550.0), ar}}, kMgO};
  EXPECT_LT(stack_response(s, 1550.0).R, 1e-10);
}

TEST(StackOptics, HalfWaveIsAbsentee) {
  const ComplexIndex film{2.3, 0.0};
  Stack s{kAir, {{"film", 1550.0 / (2 * 2.3), film}}, kMgO};
  const double rf = (1.0 - 1.7) / (1.0 + 1.7);
  EXPECT_NEAR(stack_response(s, 1550.0).R, rf * rf, 1e-12);
}

TEST(StackOptics, MatchesAmplitudeOracleOnRandomStacks) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(400.0, 2000.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Stack s = random_stack(rng);
    const double l = lam(rng);
    const auto got = stack_response(s, l);
    const auto ref = oracle_response(s, l);
    EXPECT_NEAR(got.R, ref.R, 1e-10) << "trial " << trial;
    EXPECT_NEAR(got.T, ref.T, 1e-10) << "trial " << trial;
    for (std::size_t j = 0; j < s.layers.size(); ++j) {
      EXPECT_NEAR(got.A_per_layer[j], ref.A[j], 1e-9) << "trial " << trial << " layer " << j;
    }
  }
}

TEST(StackOptics, ConservationAndReciprocityProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(400.0, 2000.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Stack s = random_stack(rng);
    const double l = lam(rng);
    const auto r = stack_response(s, l);
    const double sum_a = std::accumulate(r.A_per_layer.begin(), r.A_per_layer.end(), 0.0);
    ASSERT_LT(std::abs(1.0 - r.R - r.T - sum_a), 1e-10) << "trial " << trial;
    ASSERT_NEAR(r.A_total, sum_a, 1e-12);
    for (double a : r.A_per_layer) {
      ASSERT_GE(a, 0.0);
      ASSERT_LE(a, 1.0);
    }
    const auto back = stack_response(s.reversed(), l);
    ASSERT_LT(std::abs(r.T - back.T), 1e-10) << "trial " << trial;
  }
}

TEST(StackOptics, LosslessLimitProperty) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lam(400.0, 2000.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Stack s = random_stack(rng, true);
    const auto r = stack_response(s, lam(rng));
    EXPECT_EQ(r.A_total, 0.0);
    for (double a : r.A_per_layer) EXPECT_EQ(a, 0.0);
    EXPECT_NEAR(r.R + r.T, 1.0, 1e-12);
  }
}

TEST(StackOptics, OpaqueGoldMirror) {
  Stack s{kSiO, {{"Au", 1000.0, kAu}}, kAir};
  const auto r = stack_response(s, 1550.0);
  EXPECT_LT(r.T, 1e-20);
  EXPECT_GT(r.R, 0.95);
  EXPECT_NEAR(r.R + r.A_total, 1.0, 1e-12);
}

TEST(StackOptics, VeryThickAbsorberDoesNotOverflow) {
  Stack s{kAir, {{"Au", 1e6, kAu}, {"SiO", 100.0, kSiO}}, kAir};
  const auto r = stack_response(s, 500.0);
  EXPECT_TRUE(std::isfinite(r.R));
  EXPECT_EQ(r.T, 0.0);
  EXPECT_NEAR(r.R + r.A_total, 1.0, 1e-12);
}

TEST(StackOptics, ReflectionAmplitudeAgreesWithReflectance) {
  const Stack s = cavity(250.0, {5.5, 7.0});
  EXPECT_NEAR(std::norm(reflection_amplitude(s, 1550.0)), stack_response(s, 1550.0).R, 1e-14);
}

TEST(StackOptics, FitExtinctionClosesAndIsOnRisingBranch) {
  const auto fitted = fit_extinction({5.5, 0.0}, 4.0, kMgO, 0.32, 1550.0);
  EXPECT_EQ(fitted.n, 5.5);
  EXPECT_NEAR(bare_film_absorptance(fitted, 4.0, kMgO, 1550.0), 0.32, 1e-6);
  // Slightly more extinction still raises absorption: rising branch.
  EXPECT_GT(bare_film_absorptance({5.5, fitted.k + 0.01}, 4.0, kMgO, 1550.0), 0.32);
}

TEST(StackOptics, FitExtinctionEdges) {
  EXPECT_EQ(fit_extinction({5.5, 0.0}, 4.0, kMgO, 0.0, 1550.0).k, 0.0);
  try {
    fit_extinction({5.5, 0.0}, 4.0, kMgO, 0.9, 1550.0);
    FAIL() << "expected unreachable target";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnreachableTarget);
  }
  EXPECT_THROW(fit_extinction({5.5, 0.0}, -4.0, kMgO, 0.3, 1550.0), Error);
}

TEST(StackOptics, CavityEnhancementIsBounded) {
  const auto nbn = fit_extinction({5.5, 0.0}, 4.0, kMgO, 0.32, 1550.0);
  const Stack s = cavity(250.0, nbn);
  const auto r = stack_response(s, 1550.0);
  const double ratio = r.A_per_layer[s.find_layer("NbN")] / 0.32;
  EXPECT_GE(ratio, 2.0);
  EXPECT_LE(ratio, 1.0 / 0.32);
}

TEST(StackOptics, ValidationRejectsBadStacks) {
  EXPECT_THROW(validate(Stack{kAir, {}, kMgO}), Error);
  EXPECT_THROW(validate(Stack{kAir, {{"x", 0.0, kSiO}}, kMgO}), Error);
  EXPECT_THROW(validate(Stack{kAir, {{"x", 10.0, {1.5, -0.1}}}, kMgO}), Error);
  EXPECT_THROW(validate(Stack{kAu, {{"x", 10.0, kSiO}}, kMgO}), Error);
  EXPECT_THROW(stack_response(cavity(250, kSiO), -5.0), Error);
}

TEST(StackOptics, FindLayer) {
  const Stack s = cavity(250.0, {5.5, 7.0});
  EXPECT_EQ(s.find_layer("SiO"), 1u);
  EXPECT_THROW(s.find_layer("nope"), Error);
  Stack dup = s;
  dup.layers.push_back({"SiO", 5.0, kSiO});
  EXPECT_THROW(dup.find_layer("SiO"), Error);
}
