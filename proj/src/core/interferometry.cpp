#include "core/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <fftw3.h>
#include <fmt/format.h>

#include "core/error.hpp"

namespace ocs {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kZeroPadFactor = 16;
constexpr double kFlatTolerance = 1e-12;
constexpr double kExhaustedResidual = 1e-7;
constexpr double kNoiseFloor = 1e-3;

// fftw planning is not reentrant; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

struct Periodogram {
  std::vector<double> power;  // bins 0 .. M/2
  double bin_width = 0.0;     // cycles per unit wavenumber
};

// Uniform resampling onto `count` points across [x.front(), x.back()], mean
// removed, zero padded; x ascending.
Periodogram periodogram(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t count = x.size();
  std::size_t padded = 1;
  while (padded < count) padded <<= 1;
  padded *= kZeroPadFactor;

  const double span = x.back() - x.front();
  const double dx = span / static_cast<double>(count - 1);

  std::unique_ptr<double[], FftwDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * padded)));
  std::unique_ptr<fftw_complex[], FftwDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (padded / 2 + 1))));

  std::size_t seg = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (i + 1 == count) ? x.back() : x.front() + dx * static_cast<double>(i);
    while (seg + 2 < count && x[seg + 1] < u) ++seg;
    const double t = (u - x[seg]) / (x[seg + 1] - x[seg]);
    in[i] = y[seg] + std::clamp(t, 0.0, 1.0) * (y[seg + 1] - y[seg]);
    sum += in[i];
  }
  const double mean = sum / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) in[i] -= mean;
  std::fill(in.get() + count, in.get() + padded, 0.0);

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(padded), in.get(), out.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  Periodogram p;
  p.power.resize(padded / 2 + 1);
  for (std::size_t j = 0; j < p.power.size(); ++j) {
    p.power[j] = out[j][0] * out[j][0] + out[j][1] * out[j][1];
  }
  p.bin_width = 1.0 / (static_cast<double>(padded) * dx);
  return p;
}

struct Peak {
  double frequency = 0.0;
  double power = 0.0;
};

Peak strongest_peak(const Periodogram& p) {
  const auto& pw = p.power;
  std::size_t best = 1;
  for (std::size_t j = 2; j + 1 < pw.size(); ++j) {
    if (pw[j] > pw[best]) best = j;
  }
  double offset = 0.0;
  if (best + 1 < pw.size()) {
    const double a = pw[best - 1], b = pw[best], c = pw[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return Peak{(static_cast<double>(best) + offset) * p.bin_width, pw[best]};
}

// y ~ c0 + sum_k a_k cos(2 pi f_k x) + b_k sin(2 pi f_k x)
struct SinusoidFit {
  std::vector<double> frequencies;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residual;
  double cost = 0.0;
};

Eigen::MatrixXd design_matrix(const Eigen::VectorXd& x, const std::vector<double>& freqs) {
  Eigen::MatrixXd X(x.size(), 1 + 2 * freqs.size());
  X.col(0).setOnes();
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const Eigen::ArrayXd phase = kTwoPi * freqs[k] * x.array();
    X.col(1 + 2 * k) = phase.cos().matrix();
    X.col(2 + 2 * k) = phase.sin().matrix();
  }
  return X;
}

SinusoidFit fit_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y, std::vector<double> freqs) {
  const Eigen::MatrixXd X = design_matrix(x, freqs);
  SinusoidFit fit;
  fit.coefficients = X.colPivHouseholderQr().solve(y);
  fit.residual = y - X * fit.coefficients;
  fit.cost = fit.residual.squaredNorm();
  fit.frequencies = std::move(freqs);
  return fit;
}

// Levenberg-Marquardt on the frequencies; amplitudes are re-solved linearly
// after every trial step.
SinusoidFit refine(const Eigen::VectorXd& x, const Eigen::VectorXd& y, std::vector<double> freqs) {
  SinusoidFit fit = fit_linear(x, y, std::move(freqs));
  const auto K = static_cast<Eigen::Index>(fit.frequencies.size());
  double damping = 1e-3;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::MatrixXd X = design_matrix(x, fit.frequencies);
    Eigen::MatrixXd J(x.size(), K + X.cols());
    for (Eigen::Index k = 0; k < K; ++k) {
      const double a = fit.coefficients(1 + 2 * k);
      const double b = fit.coefficients(2 + 2 * k);
      J.col(k) = (kTwoPi * x.array() * (-a * X.col(2 + 2 * k).array() + b * X.col(1 + 2 * k).array())).matrix();
    }
    J.rightCols(X.cols()) = X;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * fit.residual;
    const Eigen::VectorXd diag = A.diagonal().cwiseMax(1e-300);

    bool improved = false;
    double max_step = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = A;
      damped.diagonal() += damping * diag;
      const Eigen::VectorXd delta = damped.ldlt().solve(g);
      std::vector<double> trial = fit.frequencies;
      max_step = 0.0;
      for (Eigen::Index k = 0; k < K; ++k) {
        trial[k] = std::abs(trial[k] + delta(k));
        max_step = std::max(max_step, std::abs(delta(k)));
      }
      SinusoidFit candidate = fit_linear(x, y, std::move(trial));
      if (std::isfinite(candidate.cost) && candidate.cost < fit.cost) {
        const double gain = (fit.cost - candidate.cost) / std::max(fit.cost, 1e-300);
        fit = std::move(candidate);
        damping = std::max(damping * 0.1, 1e-12);
        improved = gain > 1e-15;
        break;
      }
      damping *= 10.0;
    }
    const double scale = *std::max_element(fit.frequencies.begin(), fit.frequencies.end());
    if (!improved || max_step <= 1e-13 * scale) break;
  }
  return fit;
}

}  // namespace

SurfaceModel default_surface_model(double l_air_um, double l_sub_um, double n_sub, double fiber_index,
                                   const std::optional<Stack>& cavity, double wavelength_nm) {
  require(fiber_index > 0.0, "fiber index must be > 0");
  require(n_sub >= 1.0, "substrate index must be >= 1");
  const double r_fiber = (fiber_index - 1.0) / (fiber_index + 1.0);
  const double r_rear = (1.0 - n_sub) / (1.0 + n_sub);
  const std::complex<double> r_front =
      cavity ? reflection_amplitude(*cavity, wavelength_nm) : std::complex<double>((n_sub - 1.0) / (n_sub + 1.0));
  SurfaceModel m;
  m.r[0] = r_fiber;
  m.r[1] = (1.0 - r_fiber * r_fiber) * r_rear;
  m.r[2] = (1.0 - r_fiber * r_fiber) * (1.0 - r_rear * r_rear) * r_front;
  m.l_air_um = l_air_um;
  m.l_sub_um = l_sub_um;
  m.n_sub = n_sub;
  validate(m);
  return m;
}

void validate(const SurfaceModel& model) {
  for (std::size_t i = 0; i < model.r.size(); ++i) {
    require(std::abs(model.r[i]) <= 1.0 + 1e-12, fmt::format("|r{}| must be <= 1", i + 1));
  }
  require(std::isfinite(model.l_air_um) && model.l_air_um >= 0.0, "l_air_um must be >= 0");
  require(std::isfinite(model.l_sub_um) && model.l_sub_um >= 0.0, "l_sub_um must be >= 0");
  require(std::isfinite(model.n_sub) && model.n_sub > 0.0, "n_sub must be > 0");
}

void validate(const ReflectionSpectrum& spectrum) {
  const auto& s = spectrum.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(std::isfinite(s[i].wavelength_nm) && s[i].wavelength_nm > 0.0,
            fmt::format("sample {}: wavelength must be > 0", i));
    require(std::isfinite(s[i].power) && s[i].power >= 0.0, fmt::format("sample {}: power must be >= 0", i));
    if (i) {
      require(s[i].wavelength_nm > s[i - 1].wavelength_nm,
              fmt::format("sample {}: wavelengths must be strictly increasing", i));
    }
  }
}

ReflectionSpectrum synthesize_spectrum(const SurfaceModel& model, double min_nm, double max_nm, double step_nm) {
  validate(model);
  require(std::isfinite(min_nm) && std::isfinite(max_nm) && min_nm > 0.0 && min_nm < max_nm,
          fmt::format("wavelength range must satisfy 0 < min < max (got {}..{})", min_nm, max_nm));
  require(std::isfinite(step_nm) && step_nm > 0.0, "wavelength step must be > 0");

  const auto count = static_cast<std::size_t>(std::floor((max_nm - min_nm) / step_nm * (1.0 + 1e-12))) + 1;
  ReflectionSpectrum out;
  out.samples.reserve(count);
  const double air_nm = model.l_air_um * 1e3;
  const double sub_nm = model.n_sub * model.l_sub_um * 1e3;
  for (std::size_t i = 0; i < count; ++i) {
    const double lambda = min_nm + step_nm * static_cast<double>(i);
    const double phi_air = 4.0 * std::numbers::pi * air_nm / lambda;
    const double phi_sub = 4.0 * std::numbers::pi * sub_nm / lambda;
    const auto field = model.r[0] + model.r[1] * std::polar(1.0, phi_air) +
                       model.r[2] * std::polar(1.0, phi_air + phi_sub);
    out.samples.push_back(SpectrumSample{lambda, std::norm(field)});
  }
  return out;
}

FringeAnalysis analyze_fringes(const ReflectionSpectrum& spectrum, const FringeOptions& options) {
  validate(spectrum);
  const auto& s = spectrum.samples;
  if (s.size() < kMinSpectrumSamples) {
    fail(ErrorCode::InsufficientData,
         fmt::format("spectrum has {} samples; at least {} are needed", s.size(), kMinSpectrumSamples));
  }
  require(options.relative_threshold > 0.0 && options.relative_threshold <= 1.0,
          "relative threshold must be in (0, 1]");
  require(options.max_components >= 1, "max_components must be >= 1");

  // Wavenumber axis, ascending and centred.
  const std::size_t count = s.size();
  std::vector<double> nu(count);
  std::vector<double> power(count);
  for (std::size_t i = 0; i < count; ++i) {
    nu[i] = 1.0 / s[count - 1 - i].wavelength_nm;
    power[i] = s[count - 1 - i].power;
  }
  const double nu_center = 0.5 * (nu.front() + nu.back());
  for (double& v : nu) v -= nu_center;

  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(nu.data(), static_cast<Eigen::Index>(count));
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(power.data(), static_cast<Eigen::Index>(count));
  const double mean = y.mean();
  const double spread = std::sqrt((y.array() - mean).square().mean());
  if (!(spread > kFlatTolerance * std::max(std::abs(mean), std::numeric_limits<double>::min()))) {
    fail(ErrorCode::NoFringe, "spectrum is flat; no fringes to analyze");
  }

  SinusoidFit fit;
  fit.frequencies = {};
  fit.residual = y.array() - mean;
  fit.cost = fit.residual.squaredNorm();
  double first_peak_power = 0.0;
  for (std::size_t c = 0; c < options.max_components; ++c) {
    if (c > 0 && std::sqrt(fit.cost / static_cast<double>(count)) < kExhaustedResidual * spread) break;
    std::vector<double> resid(fit.residual.data(), fit.residual.data() + count);
    const Peak peak = strongest_peak(periodogram(nu, resid));
    if (c == 0) first_peak_power = peak.power;
    if (!(peak.power > 0.0) || peak.power < kNoiseFloor * first_peak_power) break;

    std::vector<double> seeds = fit.frequencies;
    seeds.push_back(peak.frequency);
    SinusoidFit next = refine(x, y, std::move(seeds));
    if (c > 0 && !(next.cost < (1.0 - 1e-6) * fit.cost)) break;
    fit = std::move(next);
  }
  if (fit.frequencies.empty()) fail(ErrorCode::NoFringe, "no spectral peak found");

  FringeAnalysis analysis;
  double lambda_sum = 0.0;
  for (const auto& sample : s) lambda_sum += sample.wavelength_nm;
  analysis.mean_lambda_nm = lambda_sum / static_cast<double>(count);

  std::vector<double> strengths(fit.frequencies.size());
  for (std::size_t k = 0; k < strengths.size(); ++k) {
    const double a = fit.coefficients(static_cast<Eigen::Index>(1 + 2 * k));
    const double b = fit.coefficients(static_cast<Eigen::Index>(2 + 2 * k));
    strengths[k] = a * a + b * b;
  }
  const double strongest = *std::max_element(strengths.begin(), strengths.end());
  if (!(strongest > 0.0)) fail(ErrorCode::NoFringe, "no significant fringe component");
  for (std::size_t k = 0; k < strengths.size(); ++k) {
    const double rel = strengths[k] / strongest;
    if (rel < options.relative_threshold) continue;
    // Phase 4 pi D nu has 2 D cycles per unit wavenumber.
    const double distance_nm = 0.5 * fit.frequencies[k];
    if (!(distance_nm > 0.0)) continue;
    analysis.components.push_back(FringeComponent{
        analysis.mean_lambda_nm * analysis.mean_lambda_nm / (2.0 * distance_nm), distance_nm * 1e-3, rel});
  }
  if (analysis.components.empty()) fail(ErrorCode::NoFringe, "no significant fringe component");
  std::sort(analysis.components.begin(), analysis.components.end(),
            [](const auto& a, const auto& b) { return a.optical_distance_um < b.optical_distance_um; });
  return analysis;
}

double thickness_from_fringe(double delta_lambda_nm, double mean_lambda_nm, double n) {
  require(std::isfinite(delta_lambda_nm) && delta_lambda_nm > 0.0, "fringe spacing must be > 0");
  require(std::isfinite(mean_lambda_nm) && mean_lambda_nm > 0.0, "mean wavelength must be > 0");
  require(std::isfinite(n) && n > 0.0, "refractive index must be > 0");
  return mean_lambda_nm * mean_lambda_nm / (2.0 * n * delta_lambda_nm) * 1e-3;
}

}  // namespace ocs
