#pragma once

#include <span>
#include <vector>

namespace ocs {

enum class ApertureKind {
  PaperDisk,  // 1 - exp(-2 r^2 / w^2) with r = side length of the active area
  Disk,       // same formula, r = physical disk radius
  Square,     // exact separable integral over a square of the given side
};

struct Aperture {
  ApertureKind kind = ApertureKind::PaperDisk;
  double size_um = 15.0;
};

/// Which distance the beam diverges over before reaching the nanowire.
enum class PathConvention {
  Optical,  // L_air + n * L_sub (default)
  Reduced,  // L_air + L_sub / n
};

struct BeamGeometry {
  double wavelength_um = 1.55;
  double mfd_um = 10.6;  // 2 w0
  double l_air_um = 20.0;
  double l_sub_um = 45.0;
  double n_sub = 1.7;
  Aperture aperture;
  PathConvention path = PathConvention::Optical;
};

struct CouplingPoint {
  double l_sub_um = 0.0;
  double l_opt_um = 0.0;
  double eta = 0.0;
  double eta_normalized = 0.0;  // eta / eta at the thickest substrate
};

void validate(const BeamGeometry& geom);

/// Gaussian beam radius w(x) = w0 sqrt(1 + (lambda x / (pi w0^2))^2).
double spot_radius(double w0_um, double wavelength_um, double x_um);

/// L_air + n_sub * L_sub, independent of the path convention.
double optical_path_length(const BeamGeometry& geom);

/// Distance used for the beam radius, per `geom.path`.
double divergence_distance(const BeamGeometry& geom);

/// Fraction of the beam power landing on the aperture, in [0, 1]. An infinite
/// aperture size captures everything.
double coupled_fraction(const BeamGeometry& geom);

std::vector<CouplingPoint> coupling_curve(const BeamGeometry& geom_template,
                                          std::span<const double> substrate_thicknesses_um);

}  // namespace ocs
