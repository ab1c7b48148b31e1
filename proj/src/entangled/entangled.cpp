#include "qnet/entangled.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qnet/error.hpp"

namespace qnet::entangled {
namespace {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr std::size_t kMaxGraphQubits = 12;

ObservableBasis diag_basis(std::size_t qubit, double sign_x, const char* label) {
  return ObservableBasis::axis(qubit, {sign_x * kInvSqrt2, 0.0, kInvSqrt2}, label);
}

ChshSetting standard_bases(std::array<int, 4> signs, std::string name) {
  return ChshSetting{ObservableBasis::pauli_z(0), ObservableBasis::pauli_x(0), diag_basis(1, -1, "(Z-X)/sqrt2"),
                     diag_basis(1, +1, "(Z+X)/sqrt2"), signs, std::move(name)};
}

}  // namespace

std::string_view to_string(BellLabel label) noexcept {
  switch (label) {
    case BellLabel::PhiPlus: return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
    case BellLabel::PsiPlus: return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
  }
  return "?";
}

BellLabel parse_bell_label(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != '_' && c != '-' && c != ' ') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  // "phi-" loses its '-' above, so look at the raw tail as well
  const bool minus_suffix = !text.empty() && text.back() == '-';
  if (t == "phiplus" || t == "phi+") return BellLabel::PhiPlus;
  if (t == "phiminus" || (t == "phi" && minus_suffix)) return BellLabel::PhiMinus;
  if (t == "psiplus" || t == "psi+") return BellLabel::PsiPlus;
  if (t == "psiminus" || (t == "psi" && minus_suffix)) return BellLabel::PsiMinus;
  fail(ErrorCode::ConfigInvalid, "unknown Bell label '" + std::string(text) + "'");
}

PureState bell_state(BellLabel label) {
  const double s = kInvSqrt2;
  switch (label) {
    case BellLabel::PhiPlus: return PureState(ComplexVector{s, 0, 0, s});
    case BellLabel::PhiMinus: return PureState(ComplexVector{s, 0, 0, -s});
    case BellLabel::PsiPlus: return PureState(ComplexVector{0, s, s, 0});
    case BellLabel::PsiMinus: return PureState(ComplexVector{0, s, -s, 0});
  }
  fail(ErrorCode::InvalidState, "bad Bell label");
}

DensityMatrix bell_density(BellLabel label) { return DensityMatrix::from_pure(bell_state(label)); }

PureState ghz(std::size_t n) {
  if (n < 2 || n > kMaxGraphQubits) fail(ErrorCode::InvalidSize, "GHZ size must be in [2, 12]");
  ComplexVector v(std::size_t{1} << n);
  v[0] = kInvSqrt2;
  v[v.size() - 1] = kInvSqrt2;
  return PureState(std::move(v));
}

PureState w_state(std::size_t n) {
  if (n < 2 || n > kMaxGraphQubits) fail(ErrorCode::InvalidSize, "W size must be in [2, 12]");
  ComplexVector v(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) v[std::size_t{1} << k] = a;
  return PureState(std::move(v));
}

PureState graph_state(const GraphSpec& g) {
  if (g.n_vertices == 0 || g.n_vertices > kMaxGraphQubits) fail(ErrorCode::InvalidSize, "graph must have 1..12 vertices");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : g.edges) {
    if (a == b) fail(ErrorCode::InvalidGraph, "self-loop on vertex " + std::to_string(a));
    if (a >= g.n_vertices || b >= g.n_vertices) fail(ErrorCode::InvalidGraph, "edge vertex out of range");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) fail(ErrorCode::InvalidGraph, "repeated edge");
  }
  // CZ products are diagonal: amplitude of |x> is 2^{-n/2} (-1)^{#edges with both ends 1}.
  const std::size_t n = g.n_vertices;
  const std::size_t dim = std::size_t{1} << n;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  ComplexVector v(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    int parity = 0;
    for (auto [a, b] : seen) {
      const bool ba = (x >> (n - 1 - a)) & 1U, bb = (x >> (n - 1 - b)) & 1U;
      parity ^= static_cast<int>(ba && bb);
    }
    v[x] = parity ? -amp : amp;
  }
  return PureState(std::move(v));
}

std::array<Complex, 4> bell_decompose(const PureState& psi) {
  if (psi.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "Bell decomposition needs 2 qubits");
  const Complex a = psi[0], b = psi[1], c = psi[2], d = psi[3];
  const double s = kInvSqrt2;
  return {s * (a + d), s * (a - d), s * (b + c), s * (b - c)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const std::size_t n = rho.n_qubits();
  linalg::QubitIndexSet(keep).validate(n);
  if (keep.empty()) fail(ErrorCode::DimensionMismatch, "partial trace must keep at least one qubit");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const std::size_t k = keep.size(), t = traced.size();
  const std::size_t dk = std::size_t{1} << k, dt = std::size_t{1} << t;
  auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
      if ((kept_bits >> (k - 1 - i)) & 1U) idx |= std::size_t{1} << (n - 1 - keep[i]);
    for (std::size_t i = 0; i < t; ++i)
      if ((traced_bits >> (t - 1 - i)) & 1U) idx |= std::size_t{1} << (n - 1 - traced[i]);
    return idx;
  };
  ComplexMatrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex s{};
      for (std::size_t e = 0; e < dt; ++e) s += rho(compose(r, e), compose(c, e));
      out(r, c) = s;
    }
  return DensityMatrix::trusted(std::move(out));
}

std::array<double, 4> bell_fidelities(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "Bell fidelities need 2 qubits");
  std::array<double, 4> f{};
  for (std::size_t i = 0; i < 4; ++i) f[i] = state::fidelity(rho, bell_state(kBellLabels[i]));
  return f;
}

ChshSetting ChshSetting::psi_plus() { return standard_bases({+1, +1, +1, -1}, "psi_plus"); }
ChshSetting ChshSetting::phi_minus() { return standard_bases({+1, +1, +1, -1}, "phi_minus"); }
ChshSetting ChshSetting::phi_plus() { return standard_bases({+1, +1, -1, +1}, "phi_plus"); }
ChshSetting ChshSetting::psi_minus() { return standard_bases({+1, +1, -1, +1}, "psi_minus"); }

ChshSetting ChshSetting::preset(std::string_view name) {
  if (name == "psi_plus") return psi_plus();
  if (name == "phi_plus") return phi_plus();
  if (name == "phi_minus") return phi_minus();
  if (name == "psi_minus") return psi_minus();
  fail(ErrorCode::ConfigInvalid, "unknown CHSH preset '" + std::string(name) + "'");
}

std::array<double, 4> chsh_correlators(const DensityMatrix& rho, const ChshSetting& s) {
  if (rho.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "CHSH needs a 2-qubit state");
  auto corr = [&](const ObservableBasis& a, const ObservableBasis& b) {
    return state::expectation(rho, linalg::tensor(a.obs(), b.obs()));
  };
  return {corr(s.a1, s.b1), corr(s.a1, s.b2), corr(s.a2, s.b1), corr(s.a2, s.b2)};
}

double chsh_value(const DensityMatrix& rho, const ChshSetting& s) {
  const auto c = chsh_correlators(rho, s);
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) total += s.signs[i] * c[i];
  return std::abs(total);
}

double chsh_value(const PureState& psi, const ChshSetting& s) { return chsh_value(DensityMatrix::from_pure(psi), s); }

double correlator_from_row(const std::array<double, 4>& row) {
  const double total = row[0] + row[1] + row[2] + row[3];
  if (!(total > 0.0)) fail(ErrorCode::EmptyRow, "CHSH count row has zero total");
  for (double v : row)
    if (v < 0.0) fail(ErrorCode::NegativeInput, "CHSH counts must be non-negative");
  return (row[0] + row[3] - row[1] - row[2]) / total;
}

double chsh_from_counts(const ChshCounts& counts, const std::array<int, 4>& signs) {
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) total += signs[i] * correlator_from_row(counts[i]);
  return std::abs(total);
}

ChshCounts sample_chsh_counts(const DensityMatrix& rho, const ChshSetting& s, std::uint64_t rounds, RngStream& rng) {
  if (rho.n_qubits() != 2) fail(ErrorCode::DimensionMismatch, "CHSH needs a 2-qubit state");
  const std::array<std::pair<const ObservableBasis*, const ObservableBasis*>, 4> pairs{
      {{&s.a1, &s.b1}, {&s.a1, &s.b2}, {&s.a2, &s.b1}, {&s.a2, &s.b2}}};
  std::array<std::array<double, 4>, 4> table{};
  for (std::size_t r = 0; r < 4; ++r) {
    std::size_t k = 0;
    for (int sa : {+1, -1})
      for (int sb : {+1, -1})
        table[r][k++] = std::max(
            0.0, linalg::trace(pairs[r].first->projector(sa, 2) * pairs[r].second->projector(sb, 2) * rho.matrix()).real());
  }
  ChshCounts counts{};
  for (std::uint64_t i = 0; i < rounds; ++i) {
    const auto r = static_cast<std::size_t>(rng.below(4));
    const auto& p = table[r];
    const double u = rng.uniform() * (p[0] + p[1] + p[2] + p[3]);
    std::size_t k = 0;
    double acc = p[0];
    while (k < 3 && u >= acc) acc += p[++k];
    counts[r][k] += 1.0;
  }
  return counts;
}

MonogamyReport monogamy_check(const PureState& psi) {
  if (psi.n_qubits() != 3) fail(ErrorCode::DimensionMismatch, "monogamy check needs 3 qubits");
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  MonogamyReport rep{};
  rep.consistent = true;
  for (std::size_t q = 0; q < 3; ++q) rep.single_purities[q] = state::purity(partial_trace(rho, {q}));
  const std::array<std::pair<std::size_t, std::size_t>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (auto [a, b] : pairs) {
    PairReport pr{a, b, bell_fidelities(partial_trace(rho, {a, b})), 0.0, {}};
    pr.max_fidelity = *std::max_element(pr.bell_fidelities.begin(), pr.bell_fidelities.end());
    for (std::size_t i = 0; i < 4; ++i)
      if (std::abs(pr.bell_fidelities[i] - pr.max_fidelity) <= 1e-9) pr.nearest.push_back(kBellLabels[i]);
    const std::size_t other = 3 - a - b;
    if (pr.max_fidelity >= 1.0 - 1e-6 && rep.single_purities[other] < 1.0 - 1e-6) rep.consistent = false;
    rep.pairs.push_back(std::move(pr));
  }
  return rep;
}

}  // namespace qnet::entangled
