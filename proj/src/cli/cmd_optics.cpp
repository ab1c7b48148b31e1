#include <cmath>
#include <numbers>

#include "commands.hpp"
#include "qnet/channels.hpp"
#include "qnet/error.hpp"
#include "qnet/photonics.hpp"

namespace qnet::cli {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Record wave_fields(Record r, const photonics::WaveParams& w1, const photonics::WaveParams& w2) {
  r["omega1"] = w1.omega;
  r["omega2"] = w2.omega;
  return r;
}

photonics::WaveParams parse_wave(Section& s, const std::string& i) {
  return {s.number("a" + i, 1.0), s.number("w" + i, 1.0), s.number("k" + i, 1.0), s.number("phi" + i, 0.0)};
}

}  // namespace

Runner parse_optics(Section& s) {
  const std::string calc = s.text("calc");
  namespace ph = photonics;

  if (calc == "dispersion") {
    const ph::FiberPhysical f{s.number("nf"), s.number("nc")};
    return [=](Context& ctx) {
      const auto d = ph::dispersion_delay(f);
      ctx.sink.add({{"record", "dispersion"},
                    {"n_core", f.n_core},
                    {"n_clad", f.n_clad},
                    {"dt_ns_per_km", d.dt_per_km_s * 1e9},
                    {"spread_m_per_km", d.spread_m_per_km},
                    {"min_separation_m_per_km", d.min_pulse_separation_m}});
    };
  }
  if (calc == "snell") {
    const double ni = s.number("ni"), nr = s.number("nr"), theta = s.number("theta_deg");
    return [=](Context& ctx) {
      const auto r = ph::snell_refraction(ni, nr, theta * kDeg);
      Record rec{{"record", "snell"}, {"n_i", ni}, {"n_r", nr}, {"theta_i_deg", theta},
                 {"total_internal_reflection", r.total_internal_reflection}, {"theta_r_deg", nullptr}};
      if (!r.total_internal_reflection) rec["theta_r_deg"] = r.theta_r / kDeg;
      ctx.sink.add(rec);
    };
  }
  if (calc == "critical") {
    const double ni = s.number("ni"), nr = s.number("nr");
    return [=](Context& ctx) {
      ctx.sink.add({{"record", "critical_angle"}, {"n_i", ni}, {"n_r", nr}, {"theta_c_deg", ph::critical_angle(ni, nr) / kDeg}});
    };
  }
  if (calc == "na") {
    const double ni = s.number("ni", 1.0), nf = s.number("nf"), nc = s.number("nc");
    return [=](Context& ctx) {
      const auto a = ph::numerical_aperture(ni, nf, nc);
      ctx.sink.add({{"record", "numerical_aperture"},
                    {"n_i", ni},
                    {"n_f", nf},
                    {"n_c", nc},
                    {"na", a.na},
                    {"theta_max_deg", a.theta_max / kDeg},
                    {"cone_deg", a.cone / kDeg}});
    };
  }
  if (calc == "laser") {
    const ph::LaserParams p{s.number("gain"), s.number("pump"), s.number("loss"), s.number("stim")};
    return [=](Context& ctx) {
      const auto a = ph::laser_fixed_points(p);
      for (const auto& fp : a.fixed_points)
        ctx.sink.add({{"record", "laser_fixed_point"},
                      {"n", fp.n},
                      {"derivative", fp.derivative},
                      {"stability", ph::to_string(fp.stability)}});
      ctx.sink.add({{"record", "laser"}, {"lasing", a.lasing}, {"threshold_pump", a.threshold_pump}, {"pump", p.pump}});
    };
  }
  if (calc == "db") {
    const auto db = s.optional_number("db");
    const auto p_in = s.optional_number("p_in");
    const auto p_out = s.optional_number("p_out");
    if (db && (p_in || p_out)) s.error("db", "give either db or p_in/p_out, not both");
    if (!db && !(p_in && p_out)) s.error_here("needs db, or both p_in and p_out");
    return [=](Context& ctx) {
      if (db)
        ctx.sink.add({{"record", "db"}, {"db", *db}, {"fraction", ph::fraction_from_db(*db)}});
      else
        ctx.sink.add({{"record", "db"}, {"p_in", *p_in}, {"p_out", *p_out}, {"db", ph::db_loss(*p_out, *p_in)}});
    };
  }
  if (calc == "poisson") {
    const double mean = s.number("mean");
    const auto kmax = s.count("kmax", 2);
    if (kmax > 170) s.error("kmax", "must be <= 170");
    return [=](Context& ctx) {
      for (unsigned k = 0; k <= kmax; ++k)
        ctx.sink.add({{"record", "poisson"}, {"mean", mean}, {"k", k}, {"probability", ph::attenuated_poisson(mean, k)}});
    };
  }
  if (calc == "interference") {
    const auto w1 = parse_wave(s, "1");
    const auto w2 = parse_wave(s, "2");
    const double x = s.number("x", 0.0);
    return [=](Context& ctx) {
      if (w1.omega == w2.omega) {
        const auto r = ph::interference_sum(w1, w2, x);
        ctx.sink.add(wave_fields({{"record", "interference"}, {"x", x}, {"amplitude", r.amplitude}, {"phase", r.phase}}, w1, w2));
      } else {
        const auto v = ph::beat_velocities(w1, w2);
        ctx.sink.add(wave_fields({{"record", "beat"}, {"v_phase", v.v_phase}, {"v_group", v.v_group}}, w1, w2));
      }
    };
  }
  if (calc == "survival") {
    const double alpha = s.number("alpha"), length = s.number("length_km");
    const auto rate = s.optional_number("rate_hz");
    return [=](Context& ctx) {
      const double p = channels::survival_probability(alpha, length);
      Record r{{"record", "survival"},
               {"alpha_db_per_km", alpha},
               {"length_km", length},
               {"survival", p},
               {"log10_survival", channels::log10_survival(alpha, length)},
               {"expected_wait_s", nullptr}};
      if (rate) r["expected_wait_s"] = channels::expected_wait(p, *rate);
      ctx.sink.add(r);
    };
  }
  if (calc == "photons") {
    const double power = s.number("power_w"), wavelength = s.number("wavelength_m");
    const double fraction = s.number("transmit_fraction", 0.1);
    return [=](Context& ctx) {
      const double rate = ph::photon_rate(power, wavelength);
      ctx.sink.add({{"record", "photons"},
                    {"power_w", power},
                    {"wavelength_m", wavelength},
                    {"photons_per_s", rate},
                    {"transmit_fraction", fraction},
                    {"plates", ph::plates_to_single_photon(rate, fraction)}});
    };
  }
  s.error("calc",
          "unknown calculation '" + calc + "' (dispersion, snell, critical, na, laser, db, poisson, interference, "
          "survival, photons)");
}

}  // namespace qnet::cli
