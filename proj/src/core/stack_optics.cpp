#include "core/stack_optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "core/error.hpp"

namespace ocs {
namespace {

using cplx = std::complex<double>;

// Tangential E and H at a boundary, with H normalized so that H = N E for a
// forward-travelling wave.
struct Field {
  cplx E;
  cplx H;
};

// Above this |Im(phase)| a layer is split into sub-steps so the growing
// exponentials stay far from overflow.
constexpr double kMaxAttenuationPerStep = 40.0;
constexpr double kRescaleThreshold = 1e100;

void validate_index(const ComplexIndex& index, const std::string& where) {
  require(std::isfinite(index.n) && std::isfinite(index.k), where + ": index must be finite");
  require(index.n > 0.0, fmt::format("{}: n must be > 0 (got {})", where, index.n));
  require(index.k >= 0.0, fmt::format("{}: k must be >= 0 (got {})", where, index.k));
}

struct Solution {
  std::vector<Field> boundaries;  // front boundary of each layer, then the exit boundary
  cplx incident_amplitude;
  cplx reflected_amplitude;
};

Solution solve(const Stack& stack, double wavelength_nm) {
  require(std::isfinite(wavelength_nm) && wavelength_nm > 0.0,
          fmt::format("wavelength must be > 0 nm (got {})", wavelength_nm));
  validate(stack);

  const std::size_t count = stack.layers.size();
  std::vector<Field> boundaries(count + 1);

  // Unit transmitted amplitude in the exit medium, propagated back to the front.
  Field f{cplx(1.0, 0.0), stack.exit.value()};
  boundaries[count] = f;

  for (std::size_t i = count; i-- > 0;) {
    const Layer& layer = stack.layers[i];
    const cplx N = layer.index.value();
    const cplx phase = 2.0 * std::numbers::pi * N * layer.thickness_nm / wavelength_nm;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(phase.imag()) / kMaxAttenuationPerStep)));
    const cplx delta = phase / static_cast<double>(steps);
    const cplx c = std::cos(delta);
    const cplx s = std::sin(delta);
    const cplx j(0.0, 1.0);
    for (int step = 0; step < steps; ++step) {
      f = Field{c * f.E - j * s / N * f.H, -j * N * s * f.E + c * f.H};
      const double scale = std::max(std::abs(f.E), std::abs(f.H));
      if (scale > kRescaleThreshold) {
        f.E /= scale;
        f.H /= scale;
        for (std::size_t b = i + 1; b <= count; ++b) {
          boundaries[b].E /= scale;
          boundaries[b].H /= scale;
        }
      }
    }
    boundaries[i] = f;
  }

  const double n0 = stack.incident.n;
  Solution sol;
  sol.incident_amplitude = 0.5 * (f.E + f.H / n0);
  sol.reflected_amplitude = 0.5 * (f.E - f.H / n0);
  sol.boundaries = std::move(boundaries);
  return sol;
}

}  // namespace

std::size_t Stack::find_layer(const std::string& label) const {
  std::size_t found = layers.size();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].label != label) continue;
    require(found == layers.size(), fmt::format("layer label '{}' is not unique", label));
    found = i;
  }
  require(found < layers.size(), fmt::format("no layer labelled '{}'", label));
  return found;
}

Stack Stack::reversed() const {
  Stack out{exit, layers, incident};
  std::reverse(out.layers.begin(), out.layers.end());
  return out;
}

void validate(const Stack& stack) {
  validate_index(stack.incident, "incident medium");
  require(stack.incident.k == 0.0, fmt::format("incident medium must be lossless (k = {})", stack.incident.k));
  validate_index(stack.exit, "exit medium");
  require(!stack.layers.empty(), "stack has no layers");
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const Layer& layer = stack.layers[i];
    const auto where = fmt::format("layer {} ('{}')", i, layer.label);
    validate_index(layer.index, where);
    require(std::isfinite(layer.thickness_nm) && layer.thickness_nm > 0.0,
            fmt::format("{}: thickness_nm must be > 0 (got {})", where, layer.thickness_nm));
  }
}

StackResponse stack_response(const Stack& stack, double wavelength_nm) {
  const Solution sol = solve(stack, wavelength_nm);
  const double n0 = stack.incident.n;
  const double incident_flux = n0 * std::norm(sol.incident_amplitude);

  auto flux = [&](const Field& f) { return (f.E * std::conj(f.H)).real() / incident_flux; };

  StackResponse out;
  out.wavelength_nm = wavelength_nm;
  out.R = std::norm(sol.reflected_amplitude / sol.incident_amplitude);
  out.T = std::clamp(flux(sol.boundaries.back()), 0.0, 1.0);
  out.A_per_layer.resize(stack.layers.size());
  double total = 0.0;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    double a = 0.0;
    if (stack.layers[i].index.k > 0.0) {
      a = std::clamp(flux(sol.boundaries[i]) - flux(sol.boundaries[i + 1]), 0.0, 1.0);
    }
    out.A_per_layer[i] = a;
    total += a;
  }
  out.A_total = total;
  return out;
}

std::complex<double> reflection_amplitude(const Stack& stack, double wavelength_nm) {
  const Solution sol = solve(stack, wavelength_nm);
  return sol.reflected_amplitude / sol.incident_amplitude;
}

double bare_film_absorptance(ComplexIndex film, double film_thickness_nm, ComplexIndex substrate,
                             double wavelength_nm) {
  const Stack bare{ComplexIndex{1.0, 0.0}, {Layer{"film", film_thickness_nm, film}}, substrate};
  return stack_response(bare, wavelength_nm).A_per_layer.front();
}

ComplexIndex fit_extinction(ComplexIndex base, double film_thickness_nm, ComplexIndex substrate,
                            double target_absorptance, double wavelength_nm) {
  constexpr double kUpper = 50.0;
  constexpr double kTolerance = 1e-9;
  constexpr double kClosure = 1e-6;
  constexpr int kGrid = 2000;

  require(std::isfinite(target_absorptance) && target_absorptance >= 0.0 && target_absorptance < 1.0,
          fmt::format("target absorptance must be in [0, 1) (got {})", target_absorptance));
  require(film_thickness_nm > 0.0, "film thickness must be > 0");
  require(wavelength_nm > 0.0, "wavelength must be > 0");
  validate_index(ComplexIndex{base.n, 0.0}, "film");
  validate_index(substrate, "substrate");

  if (target_absorptance == 0.0) return ComplexIndex{base.n, 0.0};

  auto absorptance = [&](double k) {
    return bare_film_absorptance(ComplexIndex{base.n, k}, film_thickness_nm, substrate, wavelength_nm);
  };

  // Locate the absorptance peak on a grid, then polish it with golden section.
  int best = 0;
  double best_a = 0.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double a = absorptance(kUpper * i / kGrid);
    if (a > best_a) {
      best_a = a;
      best = i;
    }
  }
  double lo = kUpper * std::max(best - 1, 0) / kGrid;
  double hi = kUpper * std::min(best + 1, kGrid) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = absorptance(x1), f2 = absorptance(x2);
  while (hi - lo > kTolerance) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo); f2 = absorptance(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo); f1 = absorptance(x1);
    }
  }
  double k_peak = kUpper * best / kGrid;
  double a_peak = best_a;
  if (std::max(f1, f2) > a_peak) {
    k_peak = f1 > f2 ? x1 : x2;
    a_peak = std::max(f1, f2);
  }
  if (target_absorptance > a_peak) {
    fail(ErrorCode::UnreachableTarget,
         fmt::format("absorptance {} is unreachable: a {} nm film with n = {} peaks at {:.6f} (k = {:.4f})",
                     target_absorptance, film_thickness_nm, base.n, a_peak, k_peak));
  }

  double k_lo = 0.0, k_hi = k_peak;
  while (k_hi - k_lo > kTolerance) {
    const double mid = 0.5 * (k_lo + k_hi);
    (absorptance(mid) < target_absorptance ? k_lo : k_hi) = mid;
  }
  const double k = 0.5 * (k_lo + k_hi);
  const double achieved = absorptance(k);
  if (std::abs(achieved - target_absorptance) > kClosure) {
    fail(ErrorCode::UnreachableTarget,
         fmt::format("extinction fit did not close: A = {} for target {}", achieved, target_absorptance));
  }
  return ComplexIndex{base.n, k};
}

double quarter_wave_thickness(ComplexIndex index, double wavelength_nm) {
  require(index.n > 0.0, "quarter-wave thickness needs n > 0");
  require(wavelength_nm > 0.0, "quarter-wave thickness needs wavelength > 0");
  return wavelength_nm / (4.0 * index.n);
}

}  // namespace ocs
