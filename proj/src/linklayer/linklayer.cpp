#include "qnet/linklayer.hpp"

#include <algorithm>
#include <cmath>

#include "qnet/channels.hpp"
#include "qnet/error.hpp"

namespace qnet::linklayer {
namespace {

// One-way fiber delay per kilometre.
constexpr double kSecondsPerKm = protocols::kFiberSecondsPerMetre * 1000.0;
constexpr unsigned kMaxPurificationRounds = 200;

double survival(const LinkSpec& s, double km) { return channels::survival_probability(s.alpha_db_per_km, km); }

double pair_probability(const LinkSpec& s) { return std::min(1.0, s.pair_source_rate_hz / s.attempt_rate_hz); }

void require(bool ok, const char* field, const char* rule) {
  if (!ok) fail(ErrorCode::ConfigInvalid, std::string("link.") + field + ": " + rule);
}

DensityMatrix decay(DensityMatrix rho, const MemorySpec& m, double wait, std::size_t qubit) {
  if (wait <= 0.0) return rho;
  if (std::isfinite(m.T1_s)) rho = channels::apply_channel(rho, channels::RelaxationT1{wait, m.T1_s}, qubit);
  if (std::isfinite(m.T2_s)) rho = channels::apply_channel(rho, channels::DephasingT2{wait, m.T2_s}, qubit);
  return rho;
}

std::vector<BellLabel> possible_labels(const LinkSpec& s) {
  if (s.architecture == Architecture::MSM) return {entangled::kBellLabels.begin(), entangled::kBellLabels.end()};
  return {BellLabel::PsiPlus, BellLabel::PsiMinus};
}

BellLabel uniform_label(RngStream& rng) { return entangled::kBellLabels[rng.below(4)]; }

}  // namespace

std::string_view to_string(Architecture a) noexcept {
  switch (a) {
    case Architecture::MIM: return "MIM";
    case Architecture::MM: return "MM";
    case Architecture::MSM: return "MSM";
  }
  return "?";
}

Architecture parse_architecture(std::string_view text) {
  for (auto a : {Architecture::MIM, Architecture::MM, Architecture::MSM})
    if (text == to_string(a)) return a;
  fail(ErrorCode::ConfigInvalid, "unknown link architecture '" + std::string(text) + "' (MIM, MM or MSM)");
}

void validate(const LinkSpec& s) {
  require(s.length_km >= 0.0 && std::isfinite(s.length_km), "length_km", "must be a finite value >= 0");
  require(s.alpha_db_per_km >= 0.0, "alpha_db_per_km", "must be >= 0");
  if (s.bsa_position_km)
    require(*s.bsa_position_km >= 0.0 && *s.bsa_position_km <= s.length_km, "bsa_position_km",
            "must lie within [0, length_km]");
  require(s.left.T1_s > 0.0 && s.right.T1_s > 0.0, "memory_T1_s", "must be > 0");
  require(s.left.T2_s > 0.0 && s.right.T2_s > 0.0, "memory_T2_s", "must be > 0");
  require(s.attempt_rate_hz > 0.0, "attempt_rate_hz", "must be > 0");
  require(s.detector_efficiency >= 0.0 && s.detector_efficiency <= 1.0, "detector_efficiency", "must be in [0,1]");
  require(s.threshold_fidelity > 0.5 && s.threshold_fidelity <= 1.0, "threshold_fidelity", "must be in (0.5, 1]");
  require(s.raw_fidelity >= 0.0 && s.raw_fidelity <= 1.0, "raw_fidelity", "must be in [0,1]");
  require(s.dark_count_prob >= 0.0 && s.dark_count_prob <= 1.0, "dark_count_prob", "must be in [0,1]");
  require(s.extra_wait_s >= 0.0, "extra_wait_s", "must be >= 0");
  if (s.architecture == Architecture::MSM)
    require(s.pair_source_rate_hz > 0.0, "pair_source_rate_hz", "must be > 0 for MSM links");
}

// ---------------------------------------------------------------------------
// Bell measurement

std::array<double, 4> bsm_probabilities(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "Bell measurement needs 2 qubits");
  const auto branches = protocols::bell_measure_branches(rho, 0, 1);
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = branches[i].probability;
  return p;
}

BsmResult bsm_circuit(const DensityMatrix& rho, RngStream& rng) {
  if (rho.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "Bell measurement needs 2 qubits");
  const auto br = protocols::bell_measure(rho, 0, 1, rng);
  return {br.label, br.probability};
}

BsmResult bsm_circuit(const state::PureState& psi, RngStream& rng) {
  return bsm_circuit(DensityMatrix::from_pure(psi), rng);
}

std::string_view to_string(ClickPattern p) noexcept {
  switch (p) {
    case ClickPattern::D1D4: return "D1D4";
    case ClickPattern::D2D3: return "D2D3";
    case ClickPattern::D1D2: return "D1D2";
    case ClickPattern::D3D4: return "D3D4";
    case ClickPattern::SingleClick: return "single_click";
    case ClickPattern::NoClick: return "no_click";
    case ClickPattern::Other: return "other";
  }
  return "?";
}

BsaResult photonic_bsa(BellLabel photons, bool left_present, bool right_present, double efficiency, RngStream& rng,
                       double dark_count_prob) {
  const int n_present = static_cast<int>(left_present) + static_cast<int>(right_present);
  int detected = 0;
  ClickPattern two_click = ClickPattern::Other;
  std::optional<BellLabel> projected;
  if (n_present == 2) {
    if (photons == BellLabel::PsiMinus || photons == BellLabel::PsiPlus) {
      const bool first = rng.bit() == 0;
      if (photons == BellLabel::PsiMinus)
        two_click = first ? ClickPattern::D1D4 : ClickPattern::D2D3;
      else
        two_click = first ? ClickPattern::D1D2 : ClickPattern::D3D4;
      projected = photons;
      // Two detectors fire; each click survives independently.
      detected = static_cast<int>(rng.bernoulli(efficiency)) + static_cast<int>(rng.bernoulli(efficiency));
    } else {
      // Both photons leave through the same port and hit one detector.
      const bool any = rng.bernoulli(efficiency) || rng.bernoulli(efficiency);
      detected = any ? 1 : 0;
    }
  } else if (n_present == 1) {
    detected = rng.bernoulli(efficiency) ? 1 : 0;
  }

  if (detected == 2) return {two_click, projected, true};
  if (detected == 1) return {ClickPattern::SingleClick, std::nullopt, false};
  if (dark_count_prob > 0.0 && rng.bernoulli(dark_count_prob)) return {ClickPattern::SingleClick, std::nullopt, false};
  return {ClickPattern::NoClick, std::nullopt, false};
}

// ---------------------------------------------------------------------------
// Link generation

LinkGeometry geometry(const LinkSpec& s) {
  validate(s);
  const double L = s.length_km;
  const double pos = s.bsa_position_km.value_or(0.5 * L);
  LinkGeometry g{};
  switch (s.architecture) {
    case Architecture::MIM: {
      g.left_leg_km = pos;
      g.right_leg_km = L - pos;
      const double t_bsa = std::max(g.left_leg_km, g.right_leg_km) * kSecondsPerKm;
      g.bsa_latency_s = t_bsa;
      g.left_wait_s = t_bsa + g.left_leg_km * kSecondsPerKm;
      g.right_wait_s = t_bsa + g.right_leg_km * kSecondsPerKm;
      break;
    }
    case Architecture::MM:
      g.left_leg_km = L;
      g.right_leg_km = 0.0;
      g.bsa_latency_s = L * kSecondsPerKm;
      g.left_wait_s = 2.0 * L * kSecondsPerKm;
      g.right_wait_s = L * kSecondsPerKm;
      break;
    case Architecture::MSM: {
      // Source photons reach the nodes after pos and L - pos; each node emits
      // its memory photon to meet them, then learns the far outcome after L.
      g.left_leg_km = pos;
      g.right_leg_km = L - pos;
      g.bsa_latency_s = std::max(g.left_leg_km, g.right_leg_km) * kSecondsPerKm;
      g.left_wait_s = (g.right_leg_km + L - g.left_leg_km) * kSecondsPerKm;
      g.right_wait_s = (g.left_leg_km + L - g.right_leg_km) * kSecondsPerKm;
      break;
    }
  }
  if (s.architecture == Architecture::MSM)
    g.herald_latency_s = (std::max(g.left_leg_km, g.right_leg_km) + L) * kSecondsPerKm;
  else
    g.herald_latency_s = std::max(g.left_wait_s, g.right_wait_s);
  return g;
}

double herald_probability(const LinkSpec& s) {
  const LinkGeometry g = geometry(s);
  const double eta2 = 0.5 * s.detector_efficiency * s.detector_efficiency;
  switch (s.architecture) {
    case Architecture::MIM: return eta2 * survival(s, g.left_leg_km) * survival(s, g.right_leg_km);
    case Architecture::MM: return eta2 * survival(s, s.length_km);
    case Architecture::MSM:
      return pair_probability(s) * (eta2 * survival(s, g.left_leg_km)) * (eta2 * survival(s, g.right_leg_km));
  }
  return 0.0;
}

double attempt_period(const LinkSpec& s) { return std::max(1.0 / s.attempt_rate_hz, geometry(s).herald_latency_s); }

DensityMatrix heralded_pair(const LinkSpec& s, BellLabel label) {
  const LinkGeometry g = geometry(s);
  DensityMatrix rho = entangled::bell_density(label);
  if (s.raw_fidelity < 1.0) rho = channels::apply_channel(rho, channels::BitFlip{1.0 - s.raw_fidelity}, 1);
  rho = decay(std::move(rho), s.left, g.left_wait_s + s.extra_wait_s, 0);
  rho = decay(std::move(rho), s.right, g.right_wait_s + s.extra_wait_s, 1);
  return rho;
}

double heralded_fidelity(const LinkSpec& s) {
  const auto labels = possible_labels(s);
  double total = 0.0;
  for (BellLabel l : labels) total += state::fidelity(heralded_pair(s, l), entangled::bell_state(l));
  return total / static_cast<double>(labels.size());
}

AttemptTrace attempt(const LinkSpec& s, std::uint64_t index, double t_emit, RngStream& rng) {
  const LinkGeometry g = geometry(s);
  AttemptTrace tr{index, t_emit, t_emit + g.bsa_latency_s, t_emit + g.herald_latency_s, false, false,
                  BsaResult{ClickPattern::NoClick, std::nullopt, false}, std::nullopt, std::nullopt, std::nullopt,
                  std::nullopt};
  const double eta = s.detector_efficiency;
  switch (s.architecture) {
    case Architecture::MIM:
    case Architecture::MM: {
      tr.survived_left = rng.bernoulli(survival(s, g.left_leg_km));
      tr.survived_right = rng.bernoulli(survival(s, g.right_leg_km));
      tr.bsa = photonic_bsa(uniform_label(rng), tr.survived_left, tr.survived_right, eta, rng, s.dark_count_prob);
      if (tr.bsa.kept) tr.label = *tr.bsa.projected;
      break;
    }
    case Architecture::MSM: {
      const bool pair = rng.bernoulli(pair_probability(s));
      tr.survived_left = pair && rng.bernoulli(survival(s, g.left_leg_km));
      tr.survived_right = pair && rng.bernoulli(survival(s, g.right_leg_km));
      tr.bsa = photonic_bsa(uniform_label(rng), true, tr.survived_left, eta, rng, s.dark_count_prob);
      tr.bsa_right = photonic_bsa(uniform_label(rng), tr.survived_right, true, eta, rng, s.dark_count_prob);
      if (tr.bsa.kept && tr.bsa_right->kept)
        tr.label = (PauliFrame::of(*tr.bsa.projected) ^ PauliFrame::of(*tr.bsa_right->projected)).label();
      break;
    }
  }
  if (tr.label) {
    tr.post_pair = heralded_pair(s, *tr.label);
    tr.pair_fidelity = state::fidelity(*tr.post_pair, entangled::bell_state(*tr.label));
  }
  return tr;
}

LinkGeneration generate_link_entanglement(const LinkSpec& s, RngStream& rng, bool keep_traces,
                                          std::uint64_t max_attempts, double start_time_s) {
  if (herald_probability(s) <= 0.0) fail(ErrorCode::UnreachableThreshold, "link can never herald a pair");
  const double period = attempt_period(s);
  LinkGeneration out{0, 0.0, {}, {}};
  for (std::uint64_t k = 0; k < max_attempts; ++k) {
    AttemptTrace tr = attempt(s, k, start_time_s + static_cast<double>(k) * period, rng);
    out.attempts = k + 1;
    if (keep_traces) out.traces.push_back(tr);
    if (tr.label) {
      out.elapsed_s = tr.t_heralded - start_time_s;
      out.success = std::move(tr);
      return out;
    }
  }
  fail(ErrorCode::UnreachableThreshold, "no herald within " + std::to_string(max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Cost

LinkCost link_cost(const LinkSpec& s, std::optional<double> threshold) {
  const double th = threshold.value_or(s.threshold_fidelity);
  if (!(th > 0.5 && th <= 1.0)) fail(ErrorCode::ConfigInvalid, "threshold fidelity must be in (0.5, 1]");
  const double p = herald_probability(s);
  if (p <= 0.0) fail(ErrorCode::UnreachableThreshold, "link can never herald a pair");
  LinkCost c{};
  c.base_time_s = attempt_period(s) / p;
  c.raw_fidelity = heralded_fidelity(s);
  double f = c.raw_fidelity;
  double pairs = 1.0;
  unsigned r = 0;
  constexpr double kSlack = 1e-12;  // so that F == threshold counts as reached
  if (f + kSlack < th) {
    if (f <= 0.5 + kSlack || th >= 1.0)
      fail(ErrorCode::UnreachableThreshold, "purification cannot lift fidelity " + std::to_string(f) + " to " +
                                                std::to_string(th));
    while (f + kSlack < th) {
      if (++r > kMaxPurificationRounds) fail(ErrorCode::UnreachableThreshold, "purification does not converge");
      const auto step = protocols::purification_recurrence(f);
      pairs = 2.0 * pairs / step.keep_probability;
      f = step.fidelity;
    }
  }
  c.purification_rounds = r;
  c.final_fidelity = f;
  c.pair_multiplier = pairs;
  c.seconds_per_bell_pair = c.base_time_s * pairs;
  return c;
}

namespace {

double sample_pair_time(unsigned round, const std::vector<double>& keep, double period, double p, RngStream& rng) {
  if (round == 0) return static_cast<double>(rng.geometric(p)) * period;
  double t = 0.0;
  for (;;) {
    t += sample_pair_time(round - 1, keep, period, p, rng);
    t += sample_pair_time(round - 1, keep, period, p, rng);
    if (rng.bernoulli(keep[round - 1])) return t;
  }
}

}  // namespace

double link_cost_monte_carlo(const LinkSpec& s, RngStream& rng, std::uint64_t trials, std::optional<double> threshold) {
  if (trials == 0) fail(ErrorCode::ConfigInvalid, "trials must be >= 1");
  const LinkCost c = link_cost(s, threshold);
  std::vector<double> keep;
  double f = c.raw_fidelity;
  for (unsigned r = 0; r < c.purification_rounds; ++r) {
    const auto step = protocols::purification_recurrence(f);
    keep.push_back(step.keep_probability);
    f = step.fidelity;
  }
  const double period = attempt_period(s), p = herald_probability(s);
  double total = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) total += sample_pair_time(c.purification_rounds, keep, period, p, rng);
  return total / static_cast<double>(trials);
}

}  // namespace qnet::linklayer
