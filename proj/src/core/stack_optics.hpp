#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ocs {

/// Complex refractive index N = n + i k. Gain media (k < 0) are rejected.
struct ComplexIndex {
  double n = 1.0;
  double k = 0.0;

  std::complex<double> value() const noexcept { return {n, k}; }
  friend bool operator==(const ComplexIndex&, const ComplexIndex&) = default;
};

struct Layer {
  std::string label;
  double thickness_nm = 0.0;
  ComplexIndex index;
};

/// Stratified medium at normal incidence. `layers.front()` is nearest the
/// light source; incident and exit media are semi-infinite.
struct Stack {
  ComplexIndex incident;
  std::vector<Layer> layers;
  ComplexIndex exit;

  /// Index of the layer with the given label; throws if absent or ambiguous.
  std::size_t find_layer(const std::string& label) const;
  Stack reversed() const;
};

struct StackResponse {
  double wavelength_nm = 0.0;
  double R = 0.0;
  double T = 0.0;
  double A_total = 0.0;
  std::vector<double> A_per_layer;  // aligned with Stack::layers
};

/// Throws InvalidArgument on n <= 0, k < 0, non-positive thickness, an
/// absorbing incident medium, or an empty layer list.
void validate(const Stack& stack);

/// Characteristic-matrix solution. Per-layer absorptance is the drop in the
/// time-averaged Poynting flux across each layer, normalized to the incident
/// flux, so the entries telescope to 1 - R - T.
StackResponse stack_response(const Stack& stack, double wavelength_nm);

/// Complex amplitude reflection coefficient seen from the incident medium.
std::complex<double> reflection_amplitude(const Stack& stack, double wavelength_nm);

/// Absorptance of a bare film illuminated from vacuum (n = 1) and backed by a
/// semi-infinite substrate.
double bare_film_absorptance(ComplexIndex film, double film_thickness_nm, ComplexIndex substrate,
                             double wavelength_nm);

/// Chooses k (n held fixed) so the bare film absorbs `target_absorptance`.
/// The absorptance rises from 0 at k = 0 to a single peak and then falls as the
/// film turns metallic; the root is taken on the rising branch inside
/// [0, 50] by bisection to 1e-9 in k. A target above the peak raises
/// UnreachableTarget.
ComplexIndex fit_extinction(ComplexIndex base, double film_thickness_nm, ComplexIndex substrate,
                            double target_absorptance, double wavelength_nm);

double quarter_wave_thickness(ComplexIndex index, double wavelength_nm);

}  // namespace ocs
