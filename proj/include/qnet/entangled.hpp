#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnet/qstate.hpp"
#include "qnet/rng.hpp"

namespace qnet::entangled {

using state::DensityMatrix;
using state::ObservableBasis;
using state::PureState;

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellLabel, 4> kBellLabels{BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus,
                                                      BellLabel::PsiMinus};

std::string_view to_string(BellLabel label) noexcept;
/// Accepts PhiPlus / phi+ style names; throws ConfigInvalid otherwise.
BellLabel parse_bell_label(std::string_view text);

PureState bell_state(BellLabel label);
DensityMatrix bell_density(BellLabel label);

/// (|0..0> + |1..1>)/sqrt2; n >= 2, throws InvalidSize.
PureState ghz(std::size_t n);
/// Equal superposition of the n single-excitation basis states; n >= 2.
PureState w_state(std::size_t n);

struct GraphSpec {
  std::size_t n_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// prod CZ_ij |+>^n. Throws InvalidGraph for self-loops, repeated edges or
/// out-of-range vertices, InvalidSize for zero or more than 12 vertices.
PureState graph_state(const GraphSpec& g);

/// Amplitudes on (PhiPlus, PhiMinus, PsiPlus, PsiMinus).
std::array<linalg::Complex, 4> bell_decompose(const PureState& two_qubit);

/// Reduced state on the qubits in `keep` (in their listed order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// Fidelity of rho with each Bell state, in kBellLabels order.
std::array<double, 4> bell_fidelities(const DensityMatrix& two_qubit);

struct ChshSetting {
  ObservableBasis a1, a2;  // Alice's A and A-bar on qubit 0
  ObservableBasis b1, b2;  // Bob's B and B-bar on qubit 1
  // Coefficients on <A1 B1>, <A1 B2>, <A2 B1>, <A2 B2>.
  std::array<int, 4> signs;
  std::string name;

  /// A1=Z, A2=X, B1=(Z-X)/sqrt2, B2=(Z+X)/sqrt2 with signs (+,+,+,-); tuned for Psi+ and Phi-.
  static ChshSetting psi_plus();
  /// Same bases, signs (+,+,-,+); tuned for Phi+ and Psi-.
  static ChshSetting phi_plus();
  static ChshSetting phi_minus();
  static ChshSetting psi_minus();
  /// Preset by name: psi_plus, phi_plus, phi_minus, psi_minus.
  static ChshSetting preset(std::string_view name);
};

/// The four correlators <A_i B_j> in the order of ChshSetting::signs.
std::array<double, 4> chsh_correlators(const DensityMatrix& two_qubit, const ChshSetting& s);
/// |sum_k signs[k] * correlator[k]|.
double chsh_value(const DensityMatrix& two_qubit, const ChshSetting& s);
double chsh_value(const PureState& two_qubit, const ChshSetting& s);

/// Rows are the four basis pairs in ChshSetting::signs order; columns are
/// counts (or probabilities) of (++, +-, -+, --). Throws EmptyRow.
using ChshCounts = std::array<std::array<double, 4>, 4>;
double correlator_from_row(const std::array<double, 4>& row);
/// |sum_i signs[i] * E_i|.
double chsh_from_counts(const ChshCounts& counts, const std::array<int, 4>& signs);

/// Monte Carlo CHSH experiment: each round picks one of the four basis pairs
/// uniformly and samples the joint outcome from rho.
ChshCounts sample_chsh_counts(const DensityMatrix& two_qubit, const ChshSetting& s, std::uint64_t rounds,
                              RngStream& rng);

struct PairReport {
  std::size_t first, second;
  std::array<double, 4> bell_fidelities;
  double max_fidelity;
  std::vector<BellLabel> nearest;  // every label attaining the max (ties kept)
};

struct MonogamyReport {
  std::vector<PairReport> pairs;           // (0,1), (0,2), (1,2)
  std::array<double, 3> single_purities;   // purity of each reduced single-qubit state
  /// True unless some pair is maximally entangled (Bell fidelity 1 within 1e-6)
  /// while the remaining qubit is mixed (purity below 1 - 1e-6).
  bool consistent;
};

MonogamyReport monogamy_check(const PureState& three_qubit);

}  // namespace qnet::entangled
