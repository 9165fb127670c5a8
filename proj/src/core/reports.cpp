#include "core/reports.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace ocs {

std::string stack_spectrum_csv(const Stack& stack, double min_nm, double max_nm, double step_nm) {
  validate(stack);
  require(std::isfinite(min_nm) && std::isfinite(max_nm) && min_nm > 0.0 && min_nm <= max_nm,
          fmt::format("wavelength range must satisfy 0 < min <= max (got {}..{})", min_nm, max_nm));
  require(std::isfinite(step_nm) && step_nm > 0.0, "wavelength step must be > 0");

  std::vector<std::string> header = {"wavelength_nm", "R", "T", "A_total"};
  for (const auto& layer : stack.layers) header.push_back("A_" + layer.label);

  std::string out;
  csv::append_header(out, header);
  const auto count = static_cast<std::size_t>(std::floor((max_nm - min_nm) / step_nm * (1.0 + 1e-12))) + 1;
  std::vector<double> row;
  for (std::size_t i = 0; i < count; ++i) {
    const auto r = stack_response(stack, min_nm + step_nm * static_cast<double>(i));
    row.assign({r.wavelength_nm, r.R, r.T, r.A_total});
    row.insert(row.end(), r.A_per_layer.begin(), r.A_per_layer.end());
    csv::append_row(out, row);
  }
  return out;
}

std::string coupling_curve_csv(const std::vector<CouplingPoint>& points) {
  std::string out;
  const std::string header[] = {"l_sub_um", "l_opt_um", "eta", "eta_normalized"};
  csv::append_header(out, header);
  for (const auto& p : points) {
    const double row[] = {p.l_sub_um, p.l_opt_um, p.eta, p.eta_normalized};
    csv::append_row(out, row);
  }
  return out;
}

std::string spectrum_csv(const ReflectionSpectrum& spectrum) {
  std::string out;
  const std::string header[] = {"wavelength_nm", "power"};
  csv::append_header(out, header);
  for (const auto& s : spectrum.samples) {
    const double row[] = {s.wavelength_nm, s.power};
    csv::append_row(out, row);
  }
  return out;
}

ReflectionSpectrum parse_spectrum_csv(std::string_view text) {
  const auto table = csv::parse(text);
  const std::string header[] = {"wavelength_nm", "power"};
  csv::expect_header(table, header, "spectrum");
  ReflectionSpectrum spectrum;
  spectrum.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) spectrum.samples.push_back(SpectrumSample{row[0], row[1]});
  validate(spectrum);
  return spectrum;
}

std::string fringe_report_csv(const FringeAnalysis& analysis) {
  std::string out;
  const std::string header[] = {"optical_distance_um", "delta_lambda_nm", "strength"};
  csv::append_header(out, header);
  for (const auto& c : analysis.components) {
    const double row[] = {c.optical_distance_um, c.delta_lambda_nm, c.strength};
    csv::append_row(out, row);
  }
  return out;
}

std::string design_trace_csv(const DesignResult& result) {
  std::string out;
  const std::string header[] = {"candidate", "objective"};
  csv::append_header(out, header);
  for (const auto& p : result.trace) {
    const double row[] = {p.candidate, p.value};
    csv::append_row(out, row);
  }
  return out;
}

std::string design_result_csv(DesignVariable variable, const DesignResult& result) {
  return fmt::format("variable,argmax,objective\n{},{},{}\n", to_string(variable),
                     csv::format_number(result.argmax), csv::format_number(result.objective_value));
}

}  // namespace ocs
