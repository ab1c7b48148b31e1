#include "qnet/photonics.hpp"

#include <cmath>
#include <numbers>

#include "qnet/error.hpp"

namespace qnet::photonics {

double db_loss(double p_out, double p_in) {
  if (!(p_in > 0.0) || !(p_out > 0.0) || p_out > p_in)
    fail(ErrorCode::NonPositivePower, "powers must satisfy 0 < p_out <= p_in");
  return -10.0 * std::log10(p_out / p_in);
}

double fraction_from_db(double db) { return std::pow(10.0, -db / 10.0); }

DispersionResult dispersion_delay(const FiberPhysical& f) {
  if (!(f.n_clad >= 1.0) || !(f.n_core > f.n_clad)) fail(ErrorCode::InvalidIndices, "need n_core > n_clad >= 1");
  const double excess = f.n_core / f.n_clad - 1.0;
  const double dt = 1000.0 * f.n_core / kSpeedOfLight * excess;
  const double spread = dt * kSpeedOfLight / f.n_core;
  return {dt, spread, 2.0 * spread};
}

Refraction snell_refraction(double n_i, double n_r, double theta_i) {
  if (!(n_i >= 1.0) || !(n_r >= 1.0)) fail(ErrorCode::InvalidIndices, "refractive indices must be >= 1");
  if (!(theta_i >= 0.0 && theta_i < std::numbers::pi / 2))
    fail(ErrorCode::NegativeInput, "incidence angle must be in [0, pi/2)");
  const double s = n_i * std::sin(theta_i) / n_r;
  if (s > 1.0) return {true, std::numbers::pi / 2};
  return {false, std::asin(s)};
}

double critical_angle(double n_i, double n_r) {
  if (!(n_r >= 1.0)) fail(ErrorCode::InvalidIndices, "refractive indices must be >= 1");
  if (!(n_i > n_r)) fail(ErrorCode::NoTIRPossible, "total internal reflection needs n_i > n_r");
  return std::asin(n_r / n_i);
}

Aperture numerical_aperture(double n_i, double n_f, double n_c) {
  if (!(n_i >= 1.0) || !(n_c >= 1.0) || !(n_f > n_c)) fail(ErrorCode::InvalidIndices, "need n_f > n_c >= 1, n_i >= 1");
  const double na = std::sqrt(n_f * n_f - n_c * n_c);
  // Above n_i every launch angle is guided.
  const double s = std::min(1.0, na / n_i);
  const double theta = std::asin(s);
  return {na, theta, 2.0 * theta};
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

double laser_rate(const LaserParams& p, double n) {
  return (p.gain * p.pump - p.loss) * n - p.stim_rate * p.gain * n * n;
}

LaserAnalysis laser_fixed_points(const LaserParams& p) {
  if (!(p.gain > 0) || !(p.loss > 0) || !(p.stim_rate > 0) || !(p.pump >= 0))
    fail(ErrorCode::NegativeInput, "laser parameters must be positive (pump >= 0)");
  const double r = p.gain * p.pump - p.loss;
  auto slope = [&](double n) { return r - 2.0 * p.stim_rate * p.gain * n; };
  auto classify = [](double d) {
    // Relative test so that rounding at threshold is not read as a sign.
    if (std::abs(d) <= 1e-12) return Stability::Marginal;
    return d < 0 ? Stability::Stable : Stability::Unstable;
  };
  LaserAnalysis out{{}, false, p.loss / p.gain};
  const double d0 = std::abs(r) <= 1e-12 * p.loss ? 0.0 : r;
  out.fixed_points.push_back({0.0, d0, classify(d0)});
  if (d0 > 0.0) {
    const double n2 = r / (p.stim_rate * p.gain);
    const double d2 = slope(n2);
    out.fixed_points.push_back({n2, d2, classify(d2)});
    out.lasing = true;
  }
  return out;
}

Superposition interference_sum(const WaveParams& w1, const WaveParams& w2, double x) {
  if (w1.omega != w2.omega) fail(ErrorCode::FrequencyMismatch, "same-frequency sum needs equal omega");
  if (w1.amplitude < 0 || w2.amplitude < 0) fail(ErrorCode::NegativeInput, "amplitudes must be >= 0");
  const double a1 = -(w1.k * x + w1.phase);
  const double a2 = -(w2.k * x + w2.phase);
  const double amp2 = w1.amplitude * w1.amplitude + w2.amplitude * w2.amplitude +
                      2.0 * w1.amplitude * w2.amplitude * std::cos(a2 - a1);
  const double s = w1.amplitude * std::sin(a1) + w2.amplitude * std::sin(a2);
  const double c = w1.amplitude * std::cos(a1) + w2.amplitude * std::cos(a2);
  return {std::sqrt(std::max(0.0, amp2)), std::atan2(s, c)};
}

Velocities beat_velocities(const WaveParams& w1, const WaveParams& w2) {
  const double ksum = w1.k + w2.k, kdiff = w1.k - w2.k;
  if (ksum == 0.0) fail(ErrorCode::ZeroDenominator, "k1 = -k2 leaves the phase velocity undefined");
  if (kdiff == 0.0) fail(ErrorCode::ZeroDenominator, "k1 = k2 leaves the group velocity undefined");
  return {(w1.omega + w2.omega) / ksum, (w1.omega - w2.omega) / kdiff};
}

double attenuated_poisson(double mean_photons, unsigned k) {
  if (!(mean_photons >= 0.0)) fail(ErrorCode::NegativeMean, "mean photon number must be >= 0");
  if (mean_photons == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean_photons + k * std::log(mean_photons) - std::lgamma(k + 1.0));
}

double photon_rate(double power_w, double wavelength_m) {
  if (!(power_w >= 0.0) || !(wavelength_m > 0.0)) fail(ErrorCode::NegativeInput, "power >= 0 and wavelength > 0");
  return power_w * wavelength_m / (kPlanck * kSpeedOfLight);
}

unsigned plates_to_single_photon(double initial_rate, double transmit_fraction) {
  if (!(transmit_fraction > 0.0 && transmit_fraction < 1.0))
    fail(ErrorCode::InvalidProbability, "plate transmission must be in (0,1)");
  if (!(initial_rate >= 0.0)) fail(ErrorCode::NegativeInput, "rate must be >= 0");
  unsigned m = 0;
  double rate = initial_rate;
  while (rate >= 1.0) {
    rate *= transmit_fraction;
    ++m;
  }
  return m;
}

}  // namespace qnet::photonics
