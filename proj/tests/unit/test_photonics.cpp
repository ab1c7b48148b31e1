#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qnet/error.hpp"
#include "qnet/photonics.hpp"

using namespace qnet;
using namespace qnet::photonics;

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

TEST_CASE("decibel conversions") {
  CHECK(test::close(db_loss(0.5, 1.0), -10.0 * std::log10(0.5)));
  CHECK(test::close(fraction_from_db(3.0), std::pow(10.0, -0.3)));
  CHECK(test::close(fraction_from_db(db_loss(0.37, 1.0)), 0.37));
  CHECK_THROWS_AS(db_loss(1.0, 0.0), Error);
}

TEST_CASE("modal dispersion") {
  const auto d = dispersion_delay({1.5, 1.489});
  CHECK(std::abs(d.dt_per_km_s * 1e9 - 37.0) < 0.1);
  const double dt = 1000.0 * 1.5 / kSpeedOfLight * (1.5 / 1.489 - 1.0);
  CHECK(test::close(d.dt_per_km_s, dt));
  CHECK(test::close(d.spread_m_per_km, dt * kSpeedOfLight / 1.5));
  CHECK(test::close(d.min_pulse_separation_m, 2.0 * d.spread_m_per_km));
  CHECK_THROWS_AS(dispersion_delay({1.4, 1.5}), Error);
  CHECK_THROWS_AS(dispersion_delay({1.5, 0.9}), Error);
}

TEST_CASE("refraction, critical angle and aperture") {
  const auto r = snell_refraction(1.0, 1.5, 30.0 * kDeg);
  CHECK_FALSE(r.total_internal_reflection);
  CHECK(test::close(std::sin(r.theta_r), 0.5 / 1.5));
  CHECK(snell_refraction(1.5, 1.0, 60.0 * kDeg).total_internal_reflection);
  CHECK(test::close(critical_angle(1.5, 1.0), std::asin(1.0 / 1.5)));
  CHECK(std::abs(critical_angle(1.5, 1.0) / kDeg - 41.81) < 0.01);
  CHECK_THROWS_AS(critical_angle(1.0, 1.5), Error);
  const auto a = numerical_aperture(1.0, 1.5, 1.489);
  CHECK(test::close(a.na, std::sqrt(1.5 * 1.5 - 1.489 * 1.489)));
  CHECK(test::close(a.cone, 2.0 * std::asin(a.na)));
  // NA above the launch index: every angle is accepted.
  CHECK(test::close(numerical_aperture(1.0, 2.0, 1.0).theta_max, std::numbers::pi / 2));
}

TEST_CASE("laser fixed points") {
  const auto a = laser_fixed_points({2.0, 3.0, 4.0, 0.5});
  REQUIRE(a.fixed_points.size() == 2);
  CHECK(a.lasing);
  CHECK(a.fixed_points[0].n == 0.0);
  CHECK(a.fixed_points[0].stability == Stability::Unstable);
  CHECK(test::close(a.fixed_points[1].n, 2.0));
  CHECK(test::close(a.fixed_points[1].derivative, -2.0));
  CHECK(a.fixed_points[1].stability == Stability::Stable);
  CHECK(test::close(a.threshold_pump, 2.0));

  const auto below = laser_fixed_points({2.0, 1.0, 4.0, 0.5});
  CHECK_FALSE(below.lasing);
  CHECK(below.fixed_points.size() == 1);
  CHECK(below.fixed_points[0].stability == Stability::Stable);
  CHECK(laser_fixed_points({2.0, 2.0, 4.0, 0.5}).fixed_points[0].stability == Stability::Marginal);

  // Random parameters: every reported point is a root of the rate and its
  // stability agrees with the sign of a finite-difference slope.
  RngStream rng(71);
  for (int draw = 0; draw < 100; ++draw) {
    const LaserParams p{0.1 + 4.9 * rng.uniform(), 0.0 + 5 * rng.uniform(), 0.1 + 4.9 * rng.uniform(), 0.1 + 1.9 * rng.uniform()};
    const auto an = laser_fixed_points(p);
    CHECK(an.lasing == (p.gain * p.pump > p.loss));
    for (const auto& fp : an.fixed_points) {
      CHECK(std::abs(laser_rate(p, fp.n)) < 1e-9);
      const double h = 1e-6;
      const double fd = (laser_rate(p, fp.n + h) - laser_rate(p, fp.n - h)) / (2 * h);
      CHECK(std::abs(fd - fp.derivative) < 1e-5);
    }
  }
  CHECK_THROWS_AS(laser_fixed_points({0.0, 1.0, 1.0, 1.0}), Error);
}

TEST_CASE("wave superposition") {
  // Equal amplitudes in phase double; in antiphase cancel.
  CHECK(test::close(interference_sum({1, 2, 1, 0}, {1, 2, 1, 0}).amplitude, 2.0));
  CHECK(std::abs(interference_sum({1, 2, 1, 0}, {1, 2, 1, std::numbers::pi}).amplitude) < 1e-12);
  const auto s = interference_sum({3, 1, 0, 0}, {4, 1, 0, std::numbers::pi / 2});
  CHECK(test::close(s.amplitude, 5.0));
  // Direct check against a time sample of the two waves at t.
  const double t = 0.37;
  const double direct = 3 * std::sin(t) + 4 * std::sin(t - std::numbers::pi / 2);
  CHECK(test::close(s.amplitude * std::sin(t + s.phase), direct));
  CHECK_THROWS_AS(interference_sum({1, 1, 1, 0}, {1, 2, 1, 0}), Error);

  const auto v = beat_velocities({1, 10, 2, 0}, {1, 8, 1, 0});
  CHECK(test::close(v.v_phase, 18.0 / 3.0));
  CHECK(test::close(v.v_group, 2.0));
  CHECK_THROWS_AS(beat_velocities({1, 10, 1, 0}, {1, 8, 1, 0}), Error);
}

TEST_CASE("attenuated source statistics") {
  CHECK(test::close(attenuated_poisson(0.1, 0), std::exp(-0.1)));
  CHECK(test::close(attenuated_poisson(0.1, 1), 0.1 * std::exp(-0.1)));
  CHECK(test::close(attenuated_poisson(0.1, 2), 0.005 * std::exp(-0.1)));
  CHECK(attenuated_poisson(0.0, 0) == 1.0);
  CHECK(attenuated_poisson(0.0, 3) == 0.0);
  double total = 0.0;
  for (unsigned k = 0; k < 60; ++k) total += attenuated_poisson(4.0, k);
  CHECK(test::close(total, 1.0));
  CHECK_THROWS_AS(attenuated_poisson(-1.0, 0), Error);
}

TEST_CASE("photon rate and attenuating plates") {
  const double rate = photon_rate(1e-3, 1550e-9);
  CHECK(test::close(rate, 1e-3 * 1550e-9 / (kPlanck * kSpeedOfLight)));
  CHECK(plates_to_single_photon(rate, 0.1) == 16);
  CHECK(plates_to_single_photon(0.5, 0.1) == 0);
  CHECK(plates_to_single_photon(1.0, 0.5) == 1);
  CHECK_THROWS_AS(plates_to_single_photon(10.0, 1.0), Error);
}
