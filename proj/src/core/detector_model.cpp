#include "core/detector_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace ocs {
namespace {

void require_fraction(double v, std::string_view name) {
  require(std::isfinite(v) && v >= 0.0 && v <= 1.0, fmt::format("{} must be in [0, 1] (got {})", name, v));
}

}  // namespace

double system_de(const DEBudget& b) {
  require_fraction(b.coupling, "coupling");
  require_fraction(b.absorptance, "absorptance");
  require_fraction(b.intrinsic, "intrinsic");
  return b.coupling * b.absorptance * b.intrinsic;
}

double infer_intrinsic(double coupling, double absorptance, double system_de_value) {
  require_fraction(coupling, "coupling");
  require_fraction(absorptance, "absorptance");
  require_fraction(system_de_value, "system DE");
  const double optical = coupling * absorptance;
  if (!(optical > 0.0)) fail(ErrorCode::UndefinedRatio, "optical efficiency is zero; intrinsic is undefined");
  const double intrinsic = system_de_value / optical;
  require(intrinsic <= 1.0 + 1e-12,
          fmt::format("system DE {} exceeds coupling x absorptance {}; no intrinsic efficiency <= 1 explains it",
                      system_de_value, optical));
  return std::min(intrinsic, 1.0);
}

CountEfficiency de_from_counts(const CountMeasurement& m, bool subtract_dark) {
  require(std::isfinite(m.output_count_rate_cps) && m.output_count_rate_cps >= 0.0, "output rate must be >= 0");
  require(std::isfinite(m.dark_count_rate_cps) && m.dark_count_rate_cps >= 0.0, "dark rate must be >= 0");
  require(std::isfinite(m.photon_flux_cps) && m.photon_flux_cps > 0.0, "photon flux must be > 0");
  CountEfficiency out;
  out.subtracted = subtract_dark;
  out.de_raw = m.output_count_rate_cps / m.photon_flux_cps;
  out.below_dark = m.output_count_rate_cps < m.dark_count_rate_cps;
  if (subtract_dark) {
    out.de = std::max(0.0, (m.output_count_rate_cps - m.dark_count_rate_cps) / m.photon_flux_cps);
  } else {
    out.de = out.de_raw;
  }
  return out;
}

void validate(const DECurve& curve) {
  require(!curve.points.empty(), "DE curve has no points");
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    require(std::isfinite(p.dark_count_rate_cps) && p.dark_count_rate_cps >= 0.0,
            fmt::format("point {}: dark rate must be >= 0", i));
    require_fraction(p.de, fmt::format("point {}: de", i));
    if (i) {
      require(p.dark_count_rate_cps > curve.points[i - 1].dark_count_rate_cps,
              fmt::format("point {}: dark rates must be strictly increasing", i));
    }
  }
}

double de_at_dark_rate(const DECurve& curve, double dark_rate_cps, DarkRateAxis axis) {
  validate(curve);
  require(std::isfinite(dark_rate_cps), "dark rate must be finite");
  const auto& pts = curve.points;
  if (dark_rate_cps < pts.front().dark_count_rate_cps || dark_rate_cps > pts.back().dark_count_rate_cps) {
    fail(ErrorCode::ExtrapolationRefused,
         fmt::format("dark rate {} c/s is outside the measured range [{}, {}] of '{}'", dark_rate_cps,
                     pts.front().dark_count_rate_cps, pts.back().dark_count_rate_cps, curve.label));
  }
  const auto upper = std::lower_bound(pts.begin(), pts.end(), dark_rate_cps,
                                      [](const DEPoint& p, double r) { return p.dark_count_rate_cps < r; });
  if (upper->dark_count_rate_cps == dark_rate_cps) return upper->de;
  const auto lower = upper - 1;
  double t = 0.0;
  if (axis == DarkRateAxis::Log) {
    require(lower->dark_count_rate_cps > 0.0, "log interpolation needs dark rates > 0");
    t = std::log(dark_rate_cps / lower->dark_count_rate_cps) /
        std::log(upper->dark_count_rate_cps / lower->dark_count_rate_cps);
  } else {
    t = (dark_rate_cps - lower->dark_count_rate_cps) /
        (upper->dark_count_rate_cps - lower->dark_count_rate_cps);
  }
  const double v = lower->de + t * (upper->de - lower->de);
  return std::clamp(v, std::min(lower->de, upper->de), std::max(lower->de, upper->de));
}

double enhancement_factor(double de_after, double de_before) {
  require(std::isfinite(de_after) && de_after >= 0.0, "DE after must be >= 0");
  require(std::isfinite(de_before) && de_before >= 0.0, "DE before must be >= 0");
  if (de_before == 0.0) fail(ErrorCode::UndefinedRatio, "baseline DE is zero; enhancement is undefined");
  return de_after / de_before;
}

DECurve parse_de_curve_csv(std::string_view text, std::string label, double wavelength_nm) {
  const auto table = csv::parse(text);
  const std::string cols[] = {"dark_count_rate_cps", "de"};
  csv::expect_header(table, cols, "DE curve");
  DECurve curve;
  curve.label = std::move(label);
  curve.wavelength_nm = wavelength_nm;
  for (const auto& row : table.rows) curve.points.push_back(DEPoint{row[0], row[1]});
  validate(curve);
  return curve;
}

std::vector<CountMeasurement> parse_counts_csv(std::string_view text) {
  const auto table = csv::parse(text);
  const std::string cols[] = {"output_cps", "dark_cps", "flux_cps"};
  csv::expect_header(table, cols, "count measurements");
  std::vector<CountMeasurement> rows;
  for (const auto& r : table.rows) rows.push_back(CountMeasurement{r[0], r[1], r[2]});
  require(!rows.empty(), "count measurement file has no rows");
  return rows;
}

std::string counts_report_csv(const std::vector<CountMeasurement>& rows, bool subtract_dark) {
  std::vector<CountEfficiency> results;
  results.reserve(rows.size());
  for (const auto& m : rows) results.push_back(de_from_counts(m, subtract_dark));

  std::string out = fmt::format("# subtraction={}\n", subtract_dark ? "on" : "off");
  const std::string header[] = {"output_cps", "dark_cps", "flux_cps", "de", "de_raw", "below_dark"};
  csv::append_header(out, header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double values[] = {rows[i].output_count_rate_cps, rows[i].dark_count_rate_cps, rows[i].photon_flux_cps,
                             results[i].de, results[i].de_raw, results[i].below_dark ? 1.0 : 0.0};
    csv::append_row(out, values);
  }
  return out;
}

}  // namespace ocs
