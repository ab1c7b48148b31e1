#include <cmath>

#include "qnet/error.hpp"
#include "qnet/protocols.hpp"

namespace qnet::protocols {
namespace {

using linalg::ComplexMatrix;
using state::ObservableBasis;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_qubits(const DensityMatrix& rho, std::size_t n, const char* what) {
  if (rho.n_qubits() != n)
    fail(ErrorCode::DimensionMismatch, std::string(what) + " must have " + std::to_string(n) + " qubit(s)");
}

// Probabilities of (++, +-, -+, --) for observables a on qubit 0 and b on qubit 1.
std::array<double, 4> joint_table(const DensityMatrix& rho, const ObservableBasis& a, const ObservableBasis& b) {
  std::array<double, 4> t{};
  std::size_t k = 0;
  for (int sa : {+1, -1})
    for (int sb : {+1, -1}) t[k++] = std::max(0.0, linalg::trace(a.projector(sa, 2) * b.projector(sb, 2) * rho.matrix()).real());
  return t;
}

std::size_t sample_index(const std::array<double, 4>& p, RngStream& rng) {
  const double u = rng.uniform() * (p[0] + p[1] + p[2] + p[3]);
  double acc = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return 3;
}

}  // namespace

// ---------------------------------------------------------------------------
// CHSH game

std::string_view to_string(GameStrategy s) noexcept {
  switch (s) {
    case GameStrategy::AlwaysZero: return "always_zero";
    case GameStrategy::Random: return "random";
    case GameStrategy::EchoInputs: return "echo_inputs";
    case GameStrategy::Quantum: return "quantum";
  }
  return "?";
}

GameStrategy parse_game_strategy(std::string_view text) {
  for (auto s : {GameStrategy::AlwaysZero, GameStrategy::Random, GameStrategy::EchoInputs, GameStrategy::Quantum})
    if (text == to_string(s)) return s;
  fail(ErrorCode::ConfigInvalid, "unknown CHSH game strategy '" + std::string(text) + "'");
}

namespace {

struct QuantumGame {
  // tables[x][y] over (a,b) in {(0,0),(0,1),(1,0),(1,1)}
  std::array<std::array<std::array<double, 4>, 2>, 2> tables;
  QuantumGame() {
    const DensityMatrix rho = entangled::bell_density(BellLabel::PhiPlus);
    const std::array<ObservableBasis, 2> alice{ObservableBasis::pauli_z(0), ObservableBasis::pauli_x(0)};
    const std::array<ObservableBasis, 2> bob{ObservableBasis::axis(1, {kInvSqrt2, 0, kInvSqrt2}, "(Z+X)/sqrt2"),
                                             ObservableBasis::axis(1, {-kInvSqrt2, 0, kInvSqrt2}, "(Z-X)/sqrt2")};
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) tables[x][y] = joint_table(rho, alice[x], bob[y]);
  }
};

const QuantumGame& quantum_game() {
  static const QuantumGame g;
  return g;
}

bool wins(int x, int y, int a, int b) { return (x & y) == (a ^ b); }

}  // namespace

double chsh_game_win_probability(GameStrategy s) {
  double total = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double p = 0.0;
      switch (s) {
        case GameStrategy::AlwaysZero: p = wins(x, y, 0, 0) ? 1.0 : 0.0; break;
        case GameStrategy::EchoInputs: p = wins(x, y, x, y) ? 1.0 : 0.0; break;
        case GameStrategy::Random:
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) p += wins(x, y, a, b) ? 0.25 : 0.0;
          break;
        case GameStrategy::Quantum: {
          const auto& t = quantum_game().tables[x][y];
          for (int k = 0; k < 4; ++k) p += wins(x, y, k >> 1, k & 1) ? t[k] : 0.0;
          break;
        }
      }
      total += 0.25 * p;
    }
  return total;
}

GameResult chsh_game(GameStrategy s, std::uint64_t n_rounds, RngStream& rng) {
  GameResult r{n_rounds, 0};
  for (std::uint64_t i = 0; i < n_rounds; ++i) {
    const int x = rng.bit(), y = rng.bit();
    int a = 0, b = 0;
    switch (s) {
      case GameStrategy::AlwaysZero: break;
      case GameStrategy::Random:
        a = rng.bit();
        b = rng.bit();
        break;
      case GameStrategy::EchoInputs:
        a = x;
        b = y;
        break;
      case GameStrategy::Quantum: {
        const std::size_t k = sample_index(quantum_game().tables[x][y], rng);
        a = static_cast<int>(k >> 1);
        b = static_cast<int>(k & 1);
        break;
      }
    }
    if (wins(x, y, a, b)) ++r.wins;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Teleportation

TeleportOutcome teleport(const DensityMatrix& input, const DensityMatrix& resource, RngStream& rng,
                         BellLabel resource_label, double classical_distance_m) {
  require_qubits(input, 1, "teleport input");
  require_qubits(resource, 2, "teleport resource");
  if (classical_distance_m < 0) fail(ErrorCode::NegativeInput, "classical distance must be >= 0");
  const DensityMatrix joint = state::tensor(input, resource);
  const BellBranch br = bell_measure(joint, 0, 1, rng);
  const PauliFrame correction = PauliFrame::of(br.label) ^ PauliFrame::of(resource_label);
  // Without the two bits Bob holds the outcome-averaged state, which is just his reduced state.
  DensityMatrix unconditioned = entangled::partial_trace(joint, {2});
  return TeleportOutcome{br.label,
                         bits_from_label(br.label),
                         correction,
                         br.probability,
                         br.remaining,
                         std::move(unconditioned),
                         apply_frame(br.remaining, correction, 0),
                         classical_distance_m * kFiberSecondsPerMetre};
}

// ---------------------------------------------------------------------------
// Swapping

namespace {

SwapOutcome finish_swap(const BellBranch& br, PauliFrame frame_ab, PauliFrame frame_bc) {
  const PauliFrame frame = PauliFrame::of(br.label) ^ frame_ab ^ frame_bc;
  return SwapOutcome{br.label, br.probability, br.remaining, frame, apply_frame(br.remaining, frame, 1)};
}

}  // namespace

SwapOutcome entanglement_swap(const DensityMatrix& pair_ab, const DensityMatrix& pair_bc, RngStream& rng,
                              PauliFrame frame_ab, PauliFrame frame_bc) {
  require_qubits(pair_ab, 2, "swap pair AB");
  require_qubits(pair_bc, 2, "swap pair BC");
  return finish_swap(bell_measure(state::tensor(pair_ab, pair_bc), 1, 2, rng), frame_ab, frame_bc);
}

SwapOutcome entanglement_swap_branch(const DensityMatrix& pair_ab, const DensityMatrix& pair_bc, BellLabel outcome,
                                     PauliFrame frame_ab, PauliFrame frame_bc) {
  require_qubits(pair_ab, 2, "swap pair AB");
  require_qubits(pair_bc, 2, "swap pair BC");
  const auto branches = bell_measure_branches(state::tensor(pair_ab, pair_bc), 1, 2);
  for (const auto& br : branches)
    if (br.label == outcome) {
      if (br.probability < 1e-12) fail(ErrorCode::ZeroProbabilityBranch, "swap outcome has zero probability");
      return finish_swap(br, frame_ab, frame_bc);
    }
  fail(ErrorCode::InvalidState, "missing Bell branch");
}

// ---------------------------------------------------------------------------
// Purification

namespace {

struct PurifyBranches {
  std::array<double, 4> p;                      // outcome bits (a2, b2) = 00, 01, 10, 11
  std::array<std::optional<DensityMatrix>, 4> post;
};

PurifyBranches purify_branches(const DensityMatrix& pair1, const DensityMatrix& pair2) {
  require_qubits(pair1, 2, "purification pair 1");
  require_qubits(pair2, 2, "purification pair 2");
  // Qubit order (A1, B1, A2, B2).
  DensityMatrix rho = state::tensor(pair1, pair2);
  rho = state::apply_gate(rho, state::gates::CNOT(), {0, 2});
  rho = state::apply_gate(rho, state::gates::CNOT(), {1, 3});
  PurifyBranches out{};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t a = k >> 1, b = k & 1;
    const ComplexMatrix pa = linalg::outer_product(linalg::ComplexVector::basis(2, a), linalg::ComplexVector::basis(2, a));
    const ComplexMatrix pb = linalg::outer_product(linalg::ComplexVector::basis(2, b), linalg::ComplexVector::basis(2, b));
    const ComplexMatrix proj = linalg::embed_gate(linalg::tensor(pa, pb), {2, 3}, 4);
    ComplexMatrix post = proj * rho.matrix() * proj;
    const double p = std::max(0.0, linalg::trace(post).real());
    out.p[k] = p;
    if (p >= 1e-12) {
      post *= linalg::Complex{1.0 / p};
      out.post[k] = entangled::partial_trace(DensityMatrix::trusted(std::move(post)), {0, 1});
    }
  }
  return out;
}

}  // namespace

PurifyOutcome purify(const DensityMatrix& pair1, const DensityMatrix& pair2, RngStream& rng) {
  const PurifyBranches br = purify_branches(pair1, pair2);
  const std::size_t k = sample_index(br.p, rng);
  const std::array<int, 2> bits{static_cast<int>(k >> 1), static_cast<int>(k & 1)};
  const bool kept = bits[0] == bits[1];
  PurifyOutcome out{kept, bits, br.p[0] + br.p[3], std::nullopt};
  if (kept) out.post = br.post[k];
  return out;
}

PurifyAverage purify_exact(const DensityMatrix& pair1, const DensityMatrix& pair2) {
  const PurifyBranches br = purify_branches(pair1, pair2);
  const double keep = br.p[0] + br.p[3];
  if (keep < 1e-12) fail(ErrorCode::ZeroProbabilityBranch, "purification never succeeds for these inputs");
  ComplexMatrix m(4, 4);
  for (std::size_t k : {std::size_t{0}, std::size_t{3}})
    if (br.post[k]) m += linalg::Complex{br.p[k] / keep} * br.post[k]->matrix();
  return {keep, DensityMatrix::trusted(std::move(m))};
}

RecurrenceStep purification_recurrence(double f) {
  if (!(f >= 0.0 && f <= 1.0)) fail(ErrorCode::InvalidProbability, "fidelity must be in [0,1]");
  const double keep = f * f + (1 - f) * (1 - f);
  return {keep, f * f / keep};
}

DensityMatrix bitflip_pair(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) fail(ErrorCode::InvalidProbability, "fidelity must be in [0,1]");
  ComplexMatrix m = linalg::Complex{fidelity} * entangled::bell_density(BellLabel::PhiPlus).matrix();
  m += linalg::Complex{1 - fidelity} * entangled::bell_density(BellLabel::PsiPlus).matrix();
  return DensityMatrix::trusted(std::move(m));
}

}  // namespace qnet::protocols
