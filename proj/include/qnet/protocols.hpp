#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/channels.hpp"
#include "qnet/entangled.hpp"
#include "qnet/rng.hpp"

namespace qnet::protocols {

using entangled::BellLabel;
using state::DensityMatrix;
using state::PureState;

/// Fiber signalling delay, one way: 5 ns per metre.
inline constexpr double kFiberSecondsPerMetre = 5e-9;

// ---------------------------------------------------------------------------
// Pauli frames

/// The operator Z^z X^x (global phase ignored). A Bell pair with label L is
/// (I (x) frame(L)) |PhiPlus>: PhiPlus=I, PhiMinus=Z, PsiPlus=X, PsiMinus=ZX.
struct PauliFrame {
  bool z = false;
  bool x = false;

  static PauliFrame of(BellLabel label) noexcept;
  BellLabel label() const noexcept;
  /// "I", "Z", "X" or "ZX".
  std::string word() const;
  linalg::ComplexMatrix matrix() const;

  friend PauliFrame operator^(PauliFrame a, PauliFrame b) noexcept { return {a.z != b.z, a.x != b.x}; }
  friend bool operator==(PauliFrame, PauliFrame) = default;
};

// ---------------------------------------------------------------------------
// Bell measurement

/// Bell label read from the two classical bits of the CNOT, H, Z-measure
/// circuit: c1 (control after H) is the Z part, c2 the X part.
BellLabel label_from_bits(int c1, int c2) noexcept;
std::array<int, 2> bits_from_label(BellLabel label) noexcept;

struct BellBranch {
  BellLabel label;
  double probability;
  DensityMatrix remaining;  // state of every other qubit, conditioned on the outcome
};

/// All four outcomes of a Bell measurement on qubits (q0, q1) of rho. Branches
/// with probability below 1e-12 carry an arbitrary (maximally mixed) state.
std::array<BellBranch, 4> bell_measure_branches(const DensityMatrix& rho, std::size_t q0, std::size_t q1);

/// Sampled Bell measurement on (q0, q1).
BellBranch bell_measure(const DensityMatrix& rho, std::size_t q0, std::size_t q1, RngStream& rng);

/// Apply Z^z X^x to one qubit.
DensityMatrix apply_frame(const DensityMatrix& rho, PauliFrame frame, std::size_t qubit);

// ---------------------------------------------------------------------------
// CHSH game

enum class GameStrategy { AlwaysZero, Random, EchoInputs, Quantum };
std::string_view to_string(GameStrategy s) noexcept;
GameStrategy parse_game_strategy(std::string_view text);

/// Exact per-round win probability under uniformly random inputs.
double chsh_game_win_probability(GameStrategy s);

struct GameResult {
  std::uint64_t rounds;
  std::uint64_t wins;
  double win_rate() const { return rounds ? static_cast<double>(wins) / static_cast<double>(rounds) : 0.0; }
};

/// Inputs x, y are uniform bits; a round is won iff x*y == a xor b. The
/// quantum strategy shares PhiPlus; Alice measures Z (x=0) or X (x=1), Bob
/// (Z+X)/sqrt2 (y=0) or (Z-X)/sqrt2 (y=1); outcome +1 is bit 0.
GameResult chsh_game(GameStrategy s, std::uint64_t n_rounds, RngStream& rng);

// ---------------------------------------------------------------------------
// Teleportation

struct TeleportOutcome {
  BellLabel bsm_label;
  std::array<int, 2> classical_bits;
  PauliFrame correction;
  double probability;
  DensityMatrix bob_before_correction;
  DensityMatrix bob_unconditioned;  // Bob's state before any message arrives
  DensityMatrix bob_state;          // after correction
  double message_latency_s;
};

/// Qubit order is (input, Alice's half, Bob's half). `resource_label` is the
/// Bell state the resource nominally holds; the correction is
/// frame(outcome) xor frame(resource). `classical_distance_m` sets the
/// latency of the two-bit message.
TeleportOutcome teleport(const DensityMatrix& input, const DensityMatrix& resource, RngStream& rng,
                         BellLabel resource_label = BellLabel::PhiPlus, double classical_distance_m = 0.0);

// ---------------------------------------------------------------------------
// Entanglement swapping

struct SwapOutcome {
  BellLabel outcome;
  double probability;
  DensityMatrix state_ac;     // before any correction
  PauliFrame frame;           // state_ac is nominally (I (x) frame) PhiPlus
  DensityMatrix corrected;    // frame undone on C
};

/// Qubits (A, B1, B2, C); Bell measurement on B1, B2. `frame_ab`, `frame_bc`
/// are the nominal frames of the two input pairs.
SwapOutcome entanglement_swap(const DensityMatrix& pair_ab, const DensityMatrix& pair_bc, RngStream& rng,
                              PauliFrame frame_ab = {}, PauliFrame frame_bc = {});

/// Same, for a chosen outcome (throws ZeroProbabilityBranch if impossible).
SwapOutcome entanglement_swap_branch(const DensityMatrix& pair_ab, const DensityMatrix& pair_bc, BellLabel outcome,
                                     PauliFrame frame_ab = {}, PauliFrame frame_bc = {});

// ---------------------------------------------------------------------------
// Purification

struct PurifyOutcome {
  bool kept;
  std::array<int, 2> outcome_bits;      // Z results on A2, B2 (0 for +1)
  double keep_probability;              // total probability of equal outcomes
  std::optional<DensityMatrix> post;    // pair 1 after a kept round
};

/// CNOT A1->A2, CNOT B1->B2, Z on A2 and B2; keep pair 1 iff the results agree.
PurifyOutcome purify(const DensityMatrix& pair1, const DensityMatrix& pair2, RngStream& rng);

struct PurifyAverage {
  double keep_probability;
  DensityMatrix kept_state;  // pair 1 conditioned on agreement
};
PurifyAverage purify_exact(const DensityMatrix& pair1, const DensityMatrix& pair2);

struct RecurrenceStep {
  double keep_probability;  // F^2 + (1-F)^2
  double fidelity;          // F^2 / (F^2 + (1-F)^2)
};
RecurrenceStep purification_recurrence(double fidelity);

/// F |PhiPlus><PhiPlus| + (1-F) |PsiPlus><PsiPlus|.
DensityMatrix bitflip_pair(double fidelity);

// ---------------------------------------------------------------------------
// BB84

enum class EveMode { Absent, InterceptResend, BasisInformed };
std::string_view to_string(EveMode m) noexcept;
EveMode parse_eve_mode(std::string_view text);

struct Bb84Config {
  std::uint64_t n = 1000;
  EveMode eve = EveMode::Absent;
  double eve_fraction = 1.0;  // BasisInformed: probability Eve knows Alice's basis
  double test_fraction = 0.5;  // share of kept rounds disclosed for testing, in [0,1)
  std::optional<std::uint64_t> test_count;  // overrides test_fraction when set
  double channel_flip_probability = 0.0;    // bit flips on the quantum channel
  std::optional<double> abort_mismatch_fraction;
  // Fixture bit strings ('0'/'1'); basis bit 1 means X. When set they must have length n.
  std::optional<std::string> alice_bits, alice_bases, bob_bases;
};

struct KeyReport {
  std::vector<int> alice_sifted, bob_sifted;
  std::vector<std::size_t> kept_indices;  // 0-based round numbers
  std::vector<std::size_t> test_indices;  // subset of kept_indices
  std::size_t mismatch_count = 0;         // among test bits
  std::size_t test_count = 0;
  bool detection_flag = false;
  bool aborted = false;
  std::vector<int> final_key_alice, final_key_bob;
  std::vector<int> eve_sifted;  // Eve's guess of the sifted bits (empty without Eve)
};

KeyReport bb84(const Bb84Config& cfg, RngStream& rng);

/// 1 - (3/4)^n.
double bb84_detection_probability(std::uint64_t n_test_bits);

// ---------------------------------------------------------------------------
// E91

struct E91Config {
  std::uint64_t n_rounds = 1000;
  std::vector<channels::NoiseChannel> source_noise;  // applied to Bob's qubit of PsiPlus
};

struct RoundClasses {
  std::uint64_t key = 0, chsh = 0, discard = 0;
};

struct E91Result {
  KeyReport key_report;
  double chsh = 0.0;           // estimated from the CHSH-class counts
  double chsh_analytic = 0.0;  // exact value for the source state
  entangled::ChshCounts counts{};
  RoundClasses classes;
};

/// Alice: A1=Z, A2=X, A3=(Z+X)/sqrt2. Bob: B1=Z, B2=(Z-X)/sqrt2, B3=(Z+X)/sqrt2.
/// Key rounds (A1,B1) and (A3,B2) are anti-correlated on PsiPlus and Bob flips
/// them. CHSH rounds (A1,B2), (A1,B3), (A2,B2), (A2,B3) with signs (+,+,+,-).
E91Result e91(const E91Config& cfg, RngStream& rng);

}  // namespace qnet::protocols
