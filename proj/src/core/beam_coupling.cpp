#include "core/beam_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "core/error.hpp"

namespace ocs {

void validate(const BeamGeometry& g) {
  require(std::isfinite(g.wavelength_um) && g.wavelength_um > 0.0,
          fmt::format("beam.wavelength_um must be > 0 (got {})", g.wavelength_um));
  require(std::isfinite(g.mfd_um) && g.mfd_um > 0.0, fmt::format("beam.mfd_um must be > 0 (got {})", g.mfd_um));
  require(std::isfinite(g.l_air_um) && g.l_air_um >= 0.0,
          fmt::format("beam.l_air_um must be >= 0 (got {})", g.l_air_um));
  require(std::isfinite(g.l_sub_um) && g.l_sub_um >= 0.0,
          fmt::format("beam.l_sub_um must be >= 0 (got {})", g.l_sub_um));
  require(std::isfinite(g.n_sub) && g.n_sub >= 1.0, fmt::format("beam.n_sub must be >= 1 (got {})", g.n_sub));
  require(!std::isnan(g.aperture.size_um) && g.aperture.size_um > 0.0,
          fmt::format("beam.aperture.size_um must be > 0 (got {})", g.aperture.size_um));
}

double spot_radius(double w0_um, double wavelength_um, double x_um) {
  require(std::isfinite(w0_um) && w0_um > 0.0, "spot radius needs w0 > 0");
  require(std::isfinite(wavelength_um) && wavelength_um > 0.0, "spot radius needs wavelength > 0");
  require(std::isfinite(x_um) && x_um >= 0.0, "spot radius needs x >= 0");
  const double z = wavelength_um * x_um / (std::numbers::pi * w0_um * w0_um);
  return w0_um * std::sqrt(1.0 + z * z);
}

double optical_path_length(const BeamGeometry& geom) {
  validate(geom);
  return geom.l_air_um + geom.n_sub * geom.l_sub_um;
}

double divergence_distance(const BeamGeometry& geom) {
  validate(geom);
  switch (geom.path) {
    case PathConvention::Optical: return geom.l_air_um + geom.n_sub * geom.l_sub_um;
    case PathConvention::Reduced: return geom.l_air_um + geom.l_sub_um / geom.n_sub;
  }
  return 0.0;
}

double coupled_fraction(const BeamGeometry& geom) {
  const double x = divergence_distance(geom);
  const double w = spot_radius(0.5 * geom.mfd_um, geom.wavelength_um, x);
  const double size = geom.aperture.size_um;
  if (std::isinf(size)) return 1.0;
  double eta = 0.0;
  switch (geom.aperture.kind) {
    case ApertureKind::PaperDisk:
    case ApertureKind::Disk:
      eta = -std::expm1(-2.0 * size * size / (w * w));
      break;
    case ApertureKind::Square: {
      const double e = std::erf(std::numbers::sqrt2 * (0.5 * size) / w);
      eta = e * e;
      break;
    }
  }
  return std::clamp(eta, 0.0, 1.0);
}

std::vector<CouplingPoint> coupling_curve(const BeamGeometry& geom_template,
                                          std::span<const double> substrate_thicknesses_um) {
  require(!substrate_thicknesses_um.empty(), "coupling curve needs at least one substrate thickness");
  for (double t : substrate_thicknesses_um) {
    require(std::isfinite(t) && t >= 0.0, fmt::format("substrate thickness must be >= 0 (got {})", t));
  }
  validate(geom_template);

  std::vector<CouplingPoint> points;
  points.reserve(substrate_thicknesses_um.size());
  std::size_t thickest = 0;
  for (std::size_t i = 0; i < substrate_thicknesses_um.size(); ++i) {
    BeamGeometry g = geom_template;
    g.l_sub_um = substrate_thicknesses_um[i];
    points.push_back(CouplingPoint{g.l_sub_um, optical_path_length(g), coupled_fraction(g), 0.0});
    if (g.l_sub_um > points[thickest].l_sub_um) thickest = i;
  }
  const double reference = points[thickest].eta;
  if (!(reference > 0.0)) {
    fail(ErrorCode::UndefinedRatio, "coupling at the thickest substrate is zero; cannot normalize");
  }
  for (auto& p : points) p.eta_normalized = p.eta / reference;
  return points;
}

}  // namespace ocs
