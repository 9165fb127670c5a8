#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/beam_coupling.hpp"
#include "core/stack_optics.hpp"

namespace ocs {

enum class DesignVariable { CavityThicknessNm, ArThicknessNm, SubstrateThicknessUm };

std::string_view to_string(DesignVariable v) noexcept;
DesignVariable parse_design_variable(std::string_view name);

struct DesignSpace {
  DesignVariable variable = DesignVariable::CavityThicknessNm;
  double lower = 0.0;
  double upper = 0.0;
  double granularity = 0.0;  // snap step in the variable's unit; 0 disables snapping
};

struct TracePoint {
  double candidate = 0.0;
  double value = 0.0;
};

struct DesignResult {
  double argmax = 0.0;
  double objective_value = 0.0;
  std::vector<TracePoint> trace;  // every probe, in evaluation order
  bool snapped = false;
};

enum class LayerObjective {
  LayerAbsorptance,  // absorptance of the tagged nanowire layer
  Antireflection,    // 1 - R
};

inline constexpr int kGridIntervals = 64;
inline constexpr double kMinTolerance = 0.01;

void validate(const DesignSpace& space);

/// Coarse grid (65 points) over the space, golden-section refinement inside the
/// neighbouring grid cells of the best probe, then optional snapping to the
/// nearest multiple of the granularity inside the bounds. Ties go to the
/// smallest candidate. A non-finite objective raises NonFinite naming the
/// candidate.
DesignResult maximize(const std::function<double(double)>& objective, const DesignSpace& space);

DesignResult optimize_layer(const Stack& stack_template, const std::string& variable_label,
                            LayerObjective objective, const std::string& nanowire_label,
                            const DesignSpace& space, double wavelength_nm);

DesignResult optimize_substrate(const BeamGeometry& geom_template, const DesignSpace& space);

struct JointDesignResult {
  std::vector<double> argmax;
  double objective_value = 0.0;
  int sweeps = 0;
  bool converged = false;
};

inline constexpr int kMaxCoordinateSweeps = 10;
inline constexpr double kCoordinateTolerance = 1e-6;

/// Cycles `maximize` over one coordinate at a time from `start` until a full
/// sweep gains less than 1e-6 or ten sweeps have run.
JointDesignResult optimize_coordinatewise(const std::function<double(std::span<const double>)>& objective,
                                          std::span<const DesignSpace> spaces, std::vector<double> start);

/// Cavity and AR thickness together, maximizing (1 - R of the AR stack) times
/// the nanowire absorptance in the cavity stack.
JointDesignResult optimize_device(const Stack& cavity, const std::string& cavity_label,
                                  const std::string& nanowire_label, const Stack& ar_stack,
                                  const std::string& ar_label, const DesignSpace& cavity_space,
                                  const DesignSpace& ar_space, double wavelength_nm);

}  // namespace ocs
