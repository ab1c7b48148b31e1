#include <algorithm>
#include <cmath>

#include "qnet/error.hpp"
#include "qnet/protocols.hpp"

namespace qnet::protocols {

using linalg::ComplexMatrix;

PauliFrame PauliFrame::of(BellLabel label) noexcept {
  switch (label) {
    case BellLabel::PhiPlus: return {false, false};
    case BellLabel::PhiMinus: return {true, false};
    case BellLabel::PsiPlus: return {false, true};
    case BellLabel::PsiMinus: return {true, true};
  }
  return {};
}

BellLabel PauliFrame::label() const noexcept { return label_from_bits(z, x); }

std::string PauliFrame::word() const {
  if (z && x) return "ZX";
  if (z) return "Z";
  if (x) return "X";
  return "I";
}

ComplexMatrix PauliFrame::matrix() const {
  ComplexMatrix m = state::gates::I();
  if (x) m = state::gates::X() * m;
  if (z) m = state::gates::Z() * m;
  return m;
}

BellLabel label_from_bits(int c1, int c2) noexcept {
  if (c1 == 0) return c2 == 0 ? BellLabel::PhiPlus : BellLabel::PsiPlus;
  return c2 == 0 ? BellLabel::PhiMinus : BellLabel::PsiMinus;
}

std::array<int, 2> bits_from_label(BellLabel label) noexcept {
  const auto f = PauliFrame::of(label);
  return {f.z ? 1 : 0, f.x ? 1 : 0};
}

DensityMatrix apply_frame(const DensityMatrix& rho, PauliFrame frame, std::size_t qubit) {
  if (!frame.z && !frame.x) return rho;
  return state::apply_gate(rho, frame.matrix(), {qubit});
}

std::array<BellBranch, 4> bell_measure_branches(const DensityMatrix& rho, std::size_t q0, std::size_t q1) {
  const std::size_t n = rho.n_qubits();
  linalg::QubitIndexSet{q0, q1}.validate(n);
  DensityMatrix rotated = state::apply_gate(rho, state::gates::CNOT(), {q0, q1});
  rotated = state::apply_gate(rotated, state::gates::H(), {q0});

  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q)
    if (q != q0 && q != q1) rest.push_back(q);

  std::array<BellBranch, 4> out{{{BellLabel::PhiPlus, 0.0, rho},
                                 {BellLabel::PhiMinus, 0.0, rho},
                                 {BellLabel::PsiPlus, 0.0, rho},
                                 {BellLabel::PsiMinus, 0.0, rho}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [c1, c2] = bits_from_label(out[i].label);
    const ComplexMatrix p0 = linalg::outer_product(linalg::ComplexVector::basis(2, c1), linalg::ComplexVector::basis(2, c1));
    const ComplexMatrix p1 = linalg::outer_product(linalg::ComplexVector::basis(2, c2), linalg::ComplexVector::basis(2, c2));
    const ComplexMatrix proj = linalg::embed_gate(linalg::tensor(p0, p1), {q0, q1}, n);
    ComplexMatrix post = proj * rotated.matrix() * proj;
    const double p = std::clamp(linalg::trace(post).real(), 0.0, 1.0);
    out[i].probability = p;
    if (p < 1e-12) {
      out[i].remaining = DensityMatrix::maximally_mixed(rest.empty() ? 2 : rest.size());
      continue;
    }
    post *= linalg::Complex{1.0 / p};
    DensityMatrix collapsed = DensityMatrix::trusted(std::move(post));
    out[i].remaining = rest.empty() ? collapsed : entangled::partial_trace(collapsed, rest);
  }
  return out;
}

BellBranch bell_measure(const DensityMatrix& rho, std::size_t q0, std::size_t q1, RngStream& rng) {
  auto branches = bell_measure_branches(rho, q0, q1);
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_possible = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (branches[i].probability < 1e-12) continue;
    last_possible = i;
    acc += branches[i].probability;
    if (u < acc) return branches[i];
  }
  return branches[last_possible];  // rounding left u above the cumulative sum
}

}  // namespace qnet::protocols
