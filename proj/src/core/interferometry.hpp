#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/stack_optics.hpp"

namespace ocs {

/// Fiber end (r1), substrate rear (r2) and substrate front (r3) amplitude
/// reflectances, each referred to the fiber, plus the two gaps.
struct SurfaceModel {
  std::array<std::complex<double>, 3> r{};
  double l_air_um = 20.0;
  double l_sub_um = 45.0;
  double n_sub = 1.7;
};

struct SpectrumSample {
  double wavelength_nm = 0.0;
  double power = 0.0;
};

struct ReflectionSpectrum {
  std::vector<SpectrumSample> samples;
};

struct FringeComponent {
  double delta_lambda_nm = 0.0;     // fringe spacing at the mean wavelength
  double optical_distance_um = 0.0; // n * d of the surface pair
  double strength = 0.0;            // power relative to the strongest component
};

struct FringeAnalysis {
  std::vector<FringeComponent> components;  // ascending optical distance
  double mean_lambda_nm = 0.0;
};

struct FringeOptions {
  double relative_threshold = 0.1;
  std::size_t max_components = 8;
};

inline constexpr std::size_t kMinSpectrumSamples = 16;

/// Fresnel-derived amplitudes: fiber glass -> air at the fiber end, air ->
/// substrate at the rear face, and the cavity stack (or a bare substrate/air
/// face when `cavity` is empty) at the front face, each with the round-trip
/// transmission through the interfaces in front of it.
SurfaceModel default_surface_model(double l_air_um, double l_sub_um, double n_sub, double fiber_index,
                                   const std::optional<Stack>& cavity, double wavelength_nm);

void validate(const SurfaceModel& model);
void validate(const ReflectionSpectrum& spectrum);

/// Single-pass three-beam interference: samples at min + i * step up to max.
ReflectionSpectrum synthesize_spectrum(const SurfaceModel& model, double min_nm, double max_nm, double step_nm);

/// Separates superposed fringe periods. The spectrum is resampled uniformly in
/// wavenumber and its periodogram seeds peaks (quadratic interpolation); each
/// seed is then refined jointly with the previous ones by nonlinear least
/// squares on the raw samples, and the residual is searched again until it is
/// exhausted. Components below `relative_threshold` of the strongest are
/// dropped.
FringeAnalysis analyze_fringes(const ReflectionSpectrum& spectrum, const FringeOptions& options = {});

/// d = lambda^2 / (2 n delta_lambda), returned in micrometres.
double thickness_from_fringe(double delta_lambda_nm, double mean_lambda_nm, double n);

}  // namespace ocs
