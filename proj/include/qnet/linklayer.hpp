#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/protocols.hpp"

namespace qnet::linklayer {

using entangled::BellLabel;
using protocols::PauliFrame;
using state::DensityMatrix;

enum class Architecture { MIM, MM, MSM };
std::string_view to_string(Architecture a) noexcept;
Architecture parse_architecture(std::string_view text);

struct MemorySpec {
  double T1_s = std::numeric_limits<double>::infinity();
  double T2_s = std::numeric_limits<double>::infinity();
};

struct LinkSpec {
  Architecture architecture = Architecture::MIM;
  double length_km = 0.0;
  double alpha_db_per_km = 0.2;
  /// Distance of the BSA (MIM) or pair source (MSM) from the left node.
  /// Defaults to the midpoint; MM always interferes at the right node.
  std::optional<double> bsa_position_km;
  MemorySpec left, right;
  double attempt_rate_hz = 1e6;
  double detector_efficiency = 1.0;
  double pair_source_rate_hz = 0.0;  // MSM only
  double threshold_fidelity = 0.9;
  /// Fidelity of a freshly heralded pair before memory decay; the shortfall is
  /// modeled as a bit flip on the right memory.
  double raw_fidelity = 1.0;
  double dark_count_prob = 0.0;
  /// Storage time after the herald before the pair is used.
  double extra_wait_s = 0.0;
};

/// Throws ConfigInvalid with the offending field name.
void validate(const LinkSpec& spec);

// ---------------------------------------------------------------------------
// Bell measurement

struct BsmResult {
  BellLabel label;
  double probability;
};

/// Deterministic-gate Bell measurement: CNOT, H on the first qubit, then Z on both.
BsmResult bsm_circuit(const state::PureState& two_qubit, RngStream& rng);
BsmResult bsm_circuit(const DensityMatrix& two_qubit, RngStream& rng);
/// Outcome probabilities in kBellLabels order.
std::array<double, 4> bsm_probabilities(const DensityMatrix& two_qubit);

enum class ClickPattern { D1D4, D2D3, D1D2, D3D4, SingleClick, NoClick, Other };
std::string_view to_string(ClickPattern p) noexcept;

struct BsaResult {
  ClickPattern pattern;
  std::optional<BellLabel> projected;  // PsiPlus or PsiMinus on success
  bool kept;
};

/// Linear-optics analyzer: two photons in Bell state `photons` arrive unless
/// lost. Psi- clicks D1D4 or D2D3, Psi+ clicks D1D2 or D3D4, Phi+- bunch into
/// one detector. Each detector click is lost with probability 1 - efficiency.
/// Dark counts only turn a silent analyzer into a single click.
BsaResult photonic_bsa(BellLabel photons, bool left_present, bool right_present, double efficiency,
                       RngStream& rng, double dark_count_prob = 0.0);

// ---------------------------------------------------------------------------
// Link generation

struct LinkGeometry {
  double left_leg_km;   // photon path on the left side of the interference point
  double right_leg_km;  // photon path on the right side
  double herald_latency_s;       // attempt start to herald at both nodes
  double bsa_latency_s;          // attempt start to interference
  double left_wait_s, right_wait_s;  // memory storage until that node has the herald
};

LinkGeometry geometry(const LinkSpec& spec);

/// Probability that one attempt heralds a pair.
double herald_probability(const LinkSpec& spec);
/// Time between attempt starts: max(1/rate, herald latency).
double attempt_period(const LinkSpec& spec);

/// The heralded pair after memory decay, expressed in its own frame so that
/// the nominal state is `label`.
DensityMatrix heralded_pair(const LinkSpec& spec, BellLabel label);
/// Fidelity of a heralded pair to its nominal Bell state.
double heralded_fidelity(const LinkSpec& spec);

struct AttemptTrace {
  std::uint64_t index;
  double t_emit, t_bsa, t_heralded;
  bool survived_left, survived_right;
  BsaResult bsa;
  std::optional<BsaResult> bsa_right;  // MSM: analyzer at the right node
  std::optional<BellLabel> label;      // nominal memory-memory Bell state on success
  std::optional<DensityMatrix> post_pair;
  std::optional<double> pair_fidelity;
};

struct LinkGeneration {
  std::uint64_t attempts;
  double elapsed_s;  // attempt start of the first try to herald of the success
  AttemptTrace success;
  std::vector<AttemptTrace> traces;  // every attempt when requested
};

/// Repeats attempts until one heralds. Throws UnreachableThreshold if
/// `max_attempts` pass without success or the herald probability is 0.
LinkGeneration generate_link_entanglement(const LinkSpec& spec, RngStream& rng, bool keep_traces = false,
                                          std::uint64_t max_attempts = 100'000'000, double start_time_s = 0.0);

/// A single attempt starting at t_emit.
AttemptTrace attempt(const LinkSpec& spec, std::uint64_t index, double t_emit, RngStream& rng);

// ---------------------------------------------------------------------------
// Cost

struct LinkCost {
  double seconds_per_bell_pair;  // at the threshold fidelity
  unsigned purification_rounds;
  double base_time_s;      // period / herald probability
  double raw_fidelity;     // after memory decay
  double final_fidelity;   // after the purification rounds
  double pair_multiplier;  // raw pairs consumed per delivered pair
};

/// Analytic cost. `threshold` overrides spec.threshold_fidelity when given.
/// Throws UnreachableThreshold.
LinkCost link_cost(const LinkSpec& spec, std::optional<double> threshold = std::nullopt);

/// Sampled mean time per threshold-fidelity pair over `trials` deliveries,
/// using geometric attempt counts and Bernoulli purification keeps.
double link_cost_monte_carlo(const LinkSpec& spec, RngStream& rng, std::uint64_t trials,
                             std::optional<double> threshold = std::nullopt);

}  // namespace qnet::linklayer
