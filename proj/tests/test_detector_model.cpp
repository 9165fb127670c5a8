#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "core/detector_model.hpp"
#include "core/error.hpp"

using namespace ocs;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

DECurve curve() {
  return DECurve{{{10.0, 0.05}, {100.0, 0.08}, {1000.0, 0.095}}, "with AR", 1550.0};
}

}  // namespace

TEST(DetectorModel, BudgetComposition) {
  EXPECT_NEAR(system_de({0.984, 0.32, 0.0794, 1550.0}), 0.0250, 5e-5);
  EXPECT_DOUBLE_EQ(system_de({1.0, 1.0, 1.0, 1550.0}), 1.0);
  EXPECT_THROW(system_de({1.2, 0.5, 0.5, 1550.0}), Error);
}

TEST(DetectorModel, InferIntrinsicInvertsCompose) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double c = u(rng), a = u(rng), eta = u(rng);
    EXPECT_NEAR(infer_intrinsic(c, a, system_de({c, a, eta, 1550.0})), eta, 1e-12);
  }
  EXPECT_EQ(code_of([] { infer_intrinsic(0.0, 0.5, 0.1); }), ErrorCode::UndefinedRatio);
  EXPECT_THROW(infer_intrinsic(0.5, 0.5, 0.3), Error);  // would need intrinsic > 1
}

TEST(DetectorModel, EnhancementArithmetic) {
  EXPECT_EQ(enhancement_factor(0.095, 0.025), 3.8);
  EXPECT_EQ(enhancement_factor(0.25, 0.05), 5.0);
  EXPECT_EQ(code_of([] { enhancement_factor(0.1, 0.0); }), ErrorCode::UndefinedRatio);
}

TEST(DetectorModel, CountsSubtractionAndClamp) {
  const auto e = de_from_counts({1100.0, 100.0, 10000.0});
  EXPECT_DOUBLE_EQ(e.de, 0.1);
  EXPECT_DOUBLE_EQ(e.de_raw, 0.11);
  EXPECT_TRUE(e.subtracted);
  EXPECT_FALSE(e.below_dark);

  const auto raw = de_from_counts({1100.0, 100.0, 10000.0}, false);
  EXPECT_DOUBLE_EQ(raw.de, 0.11);
  EXPECT_FALSE(raw.subtracted);

  const auto below = de_from_counts({50.0, 100.0, 10000.0});
  EXPECT_EQ(below.de, 0.0);
  EXPECT_TRUE(below.below_dark);

  EXPECT_THROW(de_from_counts({10.0, 1.0, 0.0}), Error);
  EXPECT_THROW(de_from_counts({-1.0, 1.0, 10.0}), Error);
}

TEST(DetectorModel, CountsScaleInvarianceProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rate(0.0, 1e6), flux(1.0, 1e8), scale(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const CountMeasurement m{rate(rng), rate(rng), flux(rng)};
    const double s = scale(rng);
    for (bool sub : {true, false}) {
      const auto a = de_from_counts(m, sub);
      const auto b = de_from_counts({m.output_count_rate_cps * s, m.dark_count_rate_cps * s, m.photon_flux_cps * s}, sub);
      EXPECT_NEAR(a.de, b.de, 1e-12 * std::max(1.0, std::abs(a.de)));
      EXPECT_NEAR(a.de_raw, b.de_raw, 1e-12 * std::max(1.0, a.de_raw));
      EXPECT_EQ(a.below_dark, b.below_dark);
    }
  }
}

TEST(DetectorModel, DarkRateInterpolation) {
  const auto c = curve();
  EXPECT_EQ(de_at_dark_rate(c, 100.0), 0.08);
  EXPECT_EQ(de_at_dark_rate(c, 10.0), 0.05);
  EXPECT_EQ(de_at_dark_rate(c, 1000.0), 0.095);
  // Halfway in log10 between 10 and 100.
  EXPECT_NEAR(de_at_dark_rate(c, std::sqrt(1000.0)), 0.065, 1e-12);
  EXPECT_NEAR(de_at_dark_rate(c, 55.0, DarkRateAxis::Linear), 0.065, 1e-12);
  EXPECT_EQ(code_of([&] { de_at_dark_rate(c, 5.0); }), ErrorCode::ExtrapolationRefused);
  EXPECT_EQ(code_of([&] { de_at_dark_rate(c, 2000.0); }), ErrorCode::ExtrapolationRefused);
}

TEST(DetectorModel, InterpolationStaysBetweenKnotsProperty) {
  const auto c = curve();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> e(1.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double q = std::pow(10.0, e(rng));
    for (auto axis : {DarkRateAxis::Log, DarkRateAxis::Linear}) {
      const double v = de_at_dark_rate(c, q, axis);
      EXPECT_GE(v, 0.05);
      EXPECT_LE(v, 0.095);
    }
  }
}

TEST(DetectorModel, CurveValidation) {
  auto c = curve();
  c.points[1].dark_count_rate_cps = 5.0;
  EXPECT_THROW(validate(c), Error);
  c = curve();
  c.points[0].de = 1.5;
  EXPECT_THROW(validate(c), Error);
  c = curve();
  c.points.clear();
  EXPECT_THROW(validate(c), Error);
}

TEST(DetectorModel, CsvParsing) {
  const auto c = parse_de_curve_csv("dark_count_rate_cps,de\n10,0.05\n100,0.08\n", "bare", 1310.0);
  EXPECT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.label, "bare");
  EXPECT_EQ(c.wavelength_nm, 1310.0);
  EXPECT_THROW(parse_de_curve_csv("rate,de\n10,0.05\n100,0.08\n", "", 1550.0), Error);

  const auto rows = parse_counts_csv("output_cps,dark_cps,flux_cps\n1100,100,10000\n50,100,10000\n");
  ASSERT_EQ(rows.size(), 2u);
  const auto report = counts_report_csv(rows, true);
  EXPECT_EQ(report,
            "# subtraction=on\n"
            "output_cps,dark_cps,flux_cps,de,de_raw,below_dark\n"
            "1100,100,10000,0.1,0.11,0\n"
            "50,100,10000,0,0.005,1\n");
  EXPECT_EQ(counts_report_csv(rows, false).substr(0, 17), "# subtraction=off");
}
