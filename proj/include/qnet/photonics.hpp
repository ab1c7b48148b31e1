#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qnet::photonics {

/// Speed of light in vacuum, m/s, at the four-digit value used throughout.
inline constexpr double kSpeedOfLight = 2.998e8;
inline constexpr double kPlanck = 6.62607015e-34;

// ---------------------------------------------------------------------------
// Decibels

/// -10 log10(p_out / p_in). Throws NonPositivePower unless 0 < p_out <= p_in.
double db_loss(double p_out, double p_in);
/// Power ratio left after `db` decibels of loss.
double fraction_from_db(double db);

// ---------------------------------------------------------------------------
// Fibers

struct FiberPhysical {
  double n_core;
  double n_clad;
  double alpha_db_per_km = 0.0;
  double length_km = 0.0;
};

struct DispersionResult {
  double dt_per_km_s;             // slowest minus fastest mode, seconds per km
  double spread_m_per_km;         // that delay times the core speed c/n_core
  double min_pulse_separation_m;  // twice the spread, per km
};

/// Step-index mode dispersion. Throws InvalidIndices unless n_core > n_clad >= 1.
DispersionResult dispersion_delay(const FiberPhysical& f);

struct Refraction {
  bool total_internal_reflection;
  double theta_r;  // radians; meaningless under total internal reflection
};

/// Snell's law. Throws InvalidIndices for indices < 1 and NegativeInput for an
/// incidence angle outside [0, pi/2).
Refraction snell_refraction(double n_i, double n_r, double theta_i);

/// asin(n_r / n_i). Throws NoTIRPossible unless n_i > n_r.
double critical_angle(double n_i, double n_r);

struct Aperture {
  double na;         // sqrt(n_f^2 - n_c^2), capped at n_i
  double theta_max;  // radians
  double cone;       // full acceptance cone, 2 theta_max
};

/// Throws InvalidIndices unless n_f > n_c >= 1 and n_i >= 1.
Aperture numerical_aperture(double n_i, double n_f, double n_c);

// ---------------------------------------------------------------------------
// Laser rate equation  dn/dt = (G N0 - k) n - alpha_l G n^2

struct LaserParams {
  double gain;        // G
  double pump;        // N0
  double loss;        // k
  double stim_rate;   // alpha_l
};

enum class Stability { Stable, Unstable, Marginal };
std::string to_string(Stability s);

struct FixedPoint {
  double n;
  double derivative;  // d(ndot)/dn at n
  Stability stability;
};

struct LaserAnalysis {
  std::vector<FixedPoint> fixed_points;
  bool lasing;
  double threshold_pump;  // k / G
};

/// Throws NegativeInput unless G, k, alpha_l > 0 and N0 >= 0.
LaserAnalysis laser_fixed_points(const LaserParams& p);
double laser_rate(const LaserParams& p, double n);

// ---------------------------------------------------------------------------
// Interference of two waves  A sin(omega t - (k x + phi))

struct WaveParams {
  double amplitude;
  double omega;
  double k;
  double phase;
};

struct Superposition {
  double amplitude;
  double phase;  // alpha with the sum written as A sin(omega t + alpha)
};

/// Same-frequency sum at position x. Throws FrequencyMismatch when the
/// angular frequencies differ.
Superposition interference_sum(const WaveParams& w1, const WaveParams& w2, double x = 0.0);

struct Velocities {
  double v_phase;  // (omega1 + omega2) / (k1 + k2)
  double v_group;  // (omega1 - omega2) / (k1 - k2)
};
/// Throws ZeroDenominator for k1 = -k2 or k1 = k2.
Velocities beat_velocities(const WaveParams& w1, const WaveParams& w2);

// ---------------------------------------------------------------------------
// Attenuated laser

/// e^{-lambda} lambda^k / k!. Throws NegativeMean.
double attenuated_poisson(double mean_photons, unsigned k);

/// Photons per second of a beam: P lambda / (h c).
double photon_rate(double power_w, double wavelength_m);

/// Smallest m with rate * f^m < 1. Throws InvalidProbability unless 0 < f < 1
/// and NegativeInput for a negative rate.
unsigned plates_to_single_photon(double initial_rate, double transmit_fraction);

}  // namespace qnet::photonics
