#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ocs {

/// System detection efficiency as coupling x absorptance x intrinsic.
struct DEBudget {
  double coupling = 1.0;
  double absorptance = 1.0;
  double intrinsic = 1.0;
  double wavelength_nm = 1550.0;
};

struct CountMeasurement {
  double output_count_rate_cps = 0.0;
  double dark_count_rate_cps = 0.0;
  double photon_flux_cps = 0.0;
};

struct CountEfficiency {
  double de = 0.0;       // reported value (dark-subtracted when `subtracted`)
  double de_raw = 0.0;   // output / flux, never subtracted
  bool subtracted = true;
  bool below_dark = false;  // output < dark; `de` clamped to 0
};

struct DEPoint {
  double dark_count_rate_cps = 0.0;
  double de = 0.0;
};

struct DECurve {
  std::vector<DEPoint> points;
  std::string label;
  double wavelength_nm = 0.0;
};

enum class DarkRateAxis { Log, Linear };

double system_de(const DEBudget& budget);

/// Intrinsic efficiency implied by a measured system DE and the two optical
/// factors.
double infer_intrinsic(double coupling, double absorptance, double system_de_value);

CountEfficiency de_from_counts(const CountMeasurement& m, bool subtract_dark = true);

void validate(const DECurve& curve);

/// Piecewise-linear in log(dark rate) (or in the rate itself). Queries outside
/// the measured span raise ExtrapolationRefused.
double de_at_dark_rate(const DECurve& curve, double dark_rate_cps, DarkRateAxis axis = DarkRateAxis::Log);

double enhancement_factor(double de_after, double de_before);

DECurve parse_de_curve_csv(std::string_view text, std::string label, double wavelength_nm);
std::vector<CountMeasurement> parse_counts_csv(std::string_view text);
std::string counts_report_csv(const std::vector<CountMeasurement>& rows, bool subtract_dark);

}  // namespace ocs
