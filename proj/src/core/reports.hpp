#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/beam_coupling.hpp"
#include "core/design_optimizer.hpp"
#include "core/interferometry.hpp"
#include "core/stack_optics.hpp"

namespace ocs {

/// `wavelength_nm,R,T,A_total,A_<label>...`, one row per wavelength from min
/// to max in `step` increments. Every row is computed before anything is
/// returned.
std::string stack_spectrum_csv(const Stack& stack, double min_nm, double max_nm, double step_nm);

/// `l_sub_um,l_opt_um,eta,eta_normalized`
std::string coupling_curve_csv(const std::vector<CouplingPoint>& points);

/// `wavelength_nm,power`
std::string spectrum_csv(const ReflectionSpectrum& spectrum);
ReflectionSpectrum parse_spectrum_csv(std::string_view text);

/// `optical_distance_um,delta_lambda_nm,strength`
std::string fringe_report_csv(const FringeAnalysis& analysis);

/// `candidate,objective` in evaluation order.
std::string design_trace_csv(const DesignResult& result);
/// `variable,argmax,objective` header plus one row.
std::string design_result_csv(DesignVariable variable, const DesignResult& result);

}  // namespace ocs
