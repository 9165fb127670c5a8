#include "core/design_optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace ocs {
namespace {

double snap_to_lattice(double x, const DesignSpace& space) {
  const double g = space.granularity;
  double m = std::round(x / g) * g;
  const double slack = 1e-12 * std::max(std::abs(space.upper), 1.0);
  if (m < space.lower - slack) m += g;
  if (m > space.upper + slack) m -= g;
  return m;
}

class Probe {
 public:
  Probe(const std::function<double(double)>& f, DesignResult& result) : f_(f), result_(result) {}

  double operator()(double x) {
    const double v = f_(x);
    if (!std::isfinite(v)) {
      fail(ErrorCode::NonFinite, fmt::format("objective is not finite at candidate {}", x));
    }
    result_.trace.push_back(TracePoint{x, v});
    return v;
  }

 private:
  const std::function<double(double)>& f_;
  DesignResult& result_;
};

bool better(const TracePoint& a, const TracePoint& b) {
  return a.value > b.value || (a.value == b.value && a.candidate < b.candidate);
}

}  // namespace

std::string_view to_string(DesignVariable v) noexcept {
  switch (v) {
    case DesignVariable::CavityThicknessNm: return "cavity_thickness_nm";
    case DesignVariable::ArThicknessNm: return "ar_thickness_nm";
    case DesignVariable::SubstrateThicknessUm: return "substrate_thickness_um";
  }
  return "unknown";
}

DesignVariable parse_design_variable(std::string_view name) {
  for (auto v : {DesignVariable::CavityThicknessNm, DesignVariable::ArThicknessNm,
                 DesignVariable::SubstrateThicknessUm}) {
    if (to_string(v) == name) return v;
  }
  fail(ErrorCode::InvalidArgument, fmt::format("unknown design variable '{}'", name));
}

void validate(const DesignSpace& space) {
  require(std::isfinite(space.lower) && std::isfinite(space.upper), "design bounds must be finite");
  require(space.lower < space.upper,
          fmt::format("design bounds must satisfy lower < upper (got [{}, {}])", space.lower, space.upper));
  require(std::isfinite(space.granularity) && space.granularity >= 0.0, "granularity must be >= 0");
  if (space.granularity > 0.0) {
    const double m = snap_to_lattice(space.lower, space);
    require(m >= space.lower - 1e-9 * std::max(1.0, std::abs(space.lower)) &&
                m <= space.upper + 1e-9 * std::max(1.0, std::abs(space.upper)),
            fmt::format("no multiple of {} lies inside [{}, {}]", space.granularity, space.lower, space.upper));
  }
}

DesignResult maximize(const std::function<double(double)>& objective, const DesignSpace& space) {
  validate(space);
  DesignResult result;
  Probe probe(objective, result);

  const double width = space.upper - space.lower;
  std::vector<double> grid(kGridIntervals + 1);
  for (int i = 0; i <= kGridIntervals; ++i) {
    grid[i] = i == kGridIntervals ? space.upper : space.lower + width * i / kGridIntervals;
  }
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = probe(grid[i]);
    if (i == 0 || v > best_value) {
      best = i;
      best_value = v;
    }
  }

  // Golden section on the cells either side of the best grid point.
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double tolerance = std::max(kMinTolerance, space.granularity);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = probe(x1), f2 = probe(x2);
  while (hi - lo > tolerance) {
    if (f1 >= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo); f1 = probe(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo); f2 = probe(x2);
    }
  }
  probe(0.5 * (lo + hi));

  TracePoint winner = result.trace.front();
  for (const auto& p : result.trace) {
    if (better(p, winner)) winner = p;
  }
  result.argmax = winner.candidate;
  result.objective_value = winner.value;

  if (space.granularity > 0.0) {
    const double snapped = snap_to_lattice(winner.candidate, space);
    result.argmax = snapped;
    result.objective_value = probe(snapped);
    result.snapped = true;
  }
  return result;
}

DesignResult optimize_layer(const Stack& stack_template, const std::string& variable_label,
                            LayerObjective objective, const std::string& nanowire_label,
                            const DesignSpace& space, double wavelength_nm) {
  validate(stack_template);
  require(space.variable != DesignVariable::SubstrateThicknessUm,
          "substrate thickness is optimized against beam coupling, not a layer stack");
  require(space.lower > 0.0, "layer thickness bounds must be > 0");
  const std::size_t var = stack_template.find_layer(variable_label);
  std::size_t wire = 0;
  if (objective == LayerObjective::LayerAbsorptance) {
    wire = stack_template.find_layer(nanowire_label);
    require(wire != var, "the optimized layer cannot also be the nanowire layer");
  }
  require(std::isfinite(wavelength_nm) && wavelength_nm > 0.0, "wavelength must be > 0");

  Stack work = stack_template;
  auto f = [&](double thickness) {
    work.layers[var].thickness_nm = thickness;
    const auto r = stack_response(work, wavelength_nm);
    return objective == LayerObjective::LayerAbsorptance ? r.A_per_layer[wire] : 1.0 - r.R;
  };
  return maximize(f, space);
}

DesignResult optimize_substrate(const BeamGeometry& geom_template, const DesignSpace& space) {
  require(space.variable == DesignVariable::SubstrateThicknessUm,
          "substrate optimization needs the substrate_thickness_um variable");
  require(space.lower >= 0.0, "substrate thickness bounds must be >= 0");
  validate(geom_template);
  BeamGeometry g = geom_template;
  auto f = [&](double thickness) {
    g.l_sub_um = thickness;
    return coupled_fraction(g);
  };
  return maximize(f, space);
}

JointDesignResult optimize_coordinatewise(const std::function<double(std::span<const double>)>& objective,
                                          std::span<const DesignSpace> spaces, std::vector<double> start) {
  require(!spaces.empty(), "need at least one design variable");
  require(start.size() == spaces.size(), "start point does not match the number of variables");
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    validate(spaces[i]);
    start[i] = std::clamp(start[i], spaces[i].lower, spaces[i].upper);
  }

  JointDesignResult out;
  out.argmax = std::move(start);
  out.objective_value = objective(out.argmax);
  if (!std::isfinite(out.objective_value)) fail(ErrorCode::NonFinite, "objective is not finite at the start point");

  for (out.sweeps = 1; out.sweeps <= kMaxCoordinateSweeps; ++out.sweeps) {
    const double before = out.objective_value;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
      std::vector<double> point = out.argmax;
      auto f = [&](double x) {
        point[i] = x;
        return objective(point);
      };
      const DesignResult r = maximize(f, spaces[i]);
      if (r.objective_value >= out.objective_value) {
        out.argmax[i] = r.argmax;
        out.objective_value = r.objective_value;
      }
    }
    if (out.objective_value - before < kCoordinateTolerance) {
      out.converged = true;
      break;
    }
  }
  out.sweeps = std::min(out.sweeps, kMaxCoordinateSweeps);
  return out;
}

JointDesignResult optimize_device(const Stack& cavity, const std::string& cavity_label,
                                  const std::string& nanowire_label, const Stack& ar_stack,
                                  const std::string& ar_label, const DesignSpace& cavity_space,
                                  const DesignSpace& ar_space, double wavelength_nm) {
  validate(cavity);
  validate(ar_stack);
  require(cavity_space.lower > 0.0 && ar_space.lower > 0.0, "layer thickness bounds must be > 0");
  const std::size_t cav = cavity.find_layer(cavity_label);
  const std::size_t wire = cavity.find_layer(nanowire_label);
  const std::size_t ar = ar_stack.find_layer(ar_label);
  require(cav != wire, "the cavity layer cannot also be the nanowire layer");

  Stack c = cavity, a = ar_stack;
  auto f = [&](std::span<const double> x) {
    c.layers[cav].thickness_nm = x[0];
    a.layers[ar].thickness_nm = x[1];
    return (1.0 - stack_response(a, wavelength_nm).R) * stack_response(c, wavelength_nm).A_per_layer[wire];
  };
  const DesignSpace spaces[] = {cavity_space, ar_space};
  return optimize_coordinatewise(f, spaces, {cavity.layers[cav].thickness_nm, ar_stack.layers[ar].thickness_nm});
}

}  // namespace ocs
