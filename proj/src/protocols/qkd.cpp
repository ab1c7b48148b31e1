#include <algorithm>
#include <cmath>
#include <limits>

#include "qnet/error.hpp"
#include "qnet/protocols.hpp"

namespace qnet::protocols {
namespace {

using state::ObservableBasis;
using state::PureState;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Basis bit 0 is Z, 1 is X; value bit 0 is the +1 eigenstate.
PureState prepare(int value, int basis) {
  if (basis == 0) return value == 0 ? state::kets::zero() : state::kets::one();
  return value == 0 ? state::kets::plus() : state::kets::minus();
}

const ObservableBasis& basis_of(int basis) {
  static const ObservableBasis z = ObservableBasis::pauli_z(0);
  static const ObservableBasis x = ObservableBasis::pauli_x(0);
  return basis == 0 ? z : x;
}

int measure_bit(const PureState& psi, int basis, RngStream& rng) {
  return state::measure(psi, basis_of(basis), rng).outcome > 0 ? 0 : 1;
}

int fixture_bit(const std::optional<std::string>& s, std::size_t i, RngStream& rng) {
  if (!s) return rng.bit();
  return (*s)[i] == '1' ? 1 : 0;
}

void check_fixture(const std::optional<std::string>& s, std::uint64_t n, const char* name) {
  if (!s) return;
  if (s->size() != n) fail(ErrorCode::ConfigInvalid, std::string(name) + " must have exactly n characters");
  if (s->find_first_not_of("01") != std::string::npos)
    fail(ErrorCode::ConfigInvalid, std::string(name) + " may only contain 0 and 1");
}

// Deterministic choice of m positions out of `pool`, returned sorted.
std::vector<std::size_t> choose(std::vector<std::size_t> pool, std::size_t m, RngStream& rng) {
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::string_view to_string(EveMode m) noexcept {
  switch (m) {
    case EveMode::Absent: return "absent";
    case EveMode::InterceptResend: return "intercept_resend";
    case EveMode::BasisInformed: return "basis_informed";
  }
  return "?";
}

EveMode parse_eve_mode(std::string_view text) {
  for (auto m : {EveMode::Absent, EveMode::InterceptResend, EveMode::BasisInformed})
    if (text == to_string(m)) return m;
  fail(ErrorCode::ConfigInvalid, "unknown eve mode '" + std::string(text) + "'");
}

double bb84_detection_probability(std::uint64_t n_test_bits) {
  return -std::expm1(static_cast<double>(n_test_bits) * std::log(0.75));
}

KeyReport bb84(const Bb84Config& cfg, RngStream& rng) {
  if (cfg.n == 0) fail(ErrorCode::ConfigInvalid, "bb84: n must be >= 1");
  if (!(cfg.test_fraction >= 0.0 && cfg.test_fraction < 1.0))
    fail(ErrorCode::ConfigInvalid, "bb84: test_fraction must be in [0,1)");
  if (!(cfg.eve_fraction >= 0.0 && cfg.eve_fraction <= 1.0))
    fail(ErrorCode::ConfigInvalid, "bb84: eve_fraction must be in [0,1]");
  if (!(cfg.channel_flip_probability >= 0.0 && cfg.channel_flip_probability <= 1.0))
    fail(ErrorCode::ConfigInvalid, "bb84: channel_flip_probability must be in [0,1]");
  check_fixture(cfg.alice_bits, cfg.n, "alice_bits");
  check_fixture(cfg.alice_bases, cfg.n, "alice_bases");
  check_fixture(cfg.bob_bases, cfg.n, "bob_bases");

  KeyReport rep;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const int a = fixture_bit(cfg.alice_bits, i, rng);
    const int b = fixture_bit(cfg.alice_bases, i, rng);
    const int b_bob = fixture_bit(cfg.bob_bases, i, rng);
    PureState photon = prepare(a, b);

    int eve_bit = -1;
    if (cfg.eve != EveMode::Absent) {
      int eve_basis = rng.bit();
      if (cfg.eve == EveMode::BasisInformed && rng.bernoulli(cfg.eve_fraction)) eve_basis = b;
      eve_bit = measure_bit(photon, eve_basis, rng);
      photon = prepare(eve_bit, eve_basis);
    }
    if (cfg.channel_flip_probability > 0.0 && rng.bernoulli(cfg.channel_flip_probability))
      photon = state::apply_gate(photon, state::gates::X(), {0});

    const int bob_bit = measure_bit(photon, b_bob, rng);
    if (b == b_bob) {
      rep.kept_indices.push_back(i);
      rep.alice_sifted.push_back(a);
      rep.bob_sifted.push_back(bob_bit);
      if (eve_bit >= 0) rep.eve_sifted.push_back(eve_bit);
    }
  }

  const std::size_t kept = rep.kept_indices.size();
  std::size_t m = cfg.test_count ? static_cast<std::size_t>(*cfg.test_count)
                                 : static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(kept)));
  m = std::min(m, kept);
  std::vector<std::size_t> positions(kept);
  for (std::size_t k = 0; k < kept; ++k) positions[k] = k;
  const std::vector<std::size_t> test_pos = choose(positions, m, rng);

  std::vector<bool> is_test(kept, false);
  for (std::size_t p : test_pos) {
    is_test[p] = true;
    rep.test_indices.push_back(rep.kept_indices[p]);
    if (rep.alice_sifted[p] != rep.bob_sifted[p]) ++rep.mismatch_count;
  }
  rep.test_count = test_pos.size();
  rep.detection_flag = rep.mismatch_count > 0;
  if (cfg.abort_mismatch_fraction && rep.test_count > 0 &&
      static_cast<double>(rep.mismatch_count) / static_cast<double>(rep.test_count) > *cfg.abort_mismatch_fraction)
    rep.aborted = true;
  if (!rep.aborted)
    for (std::size_t k = 0; k < kept; ++k)
      if (!is_test[k]) {
        rep.final_key_alice.push_back(rep.alice_sifted[k]);
        rep.final_key_bob.push_back(rep.bob_sifted[k]);
      }
  return rep;
}

E91Result e91(const E91Config& cfg, RngStream& rng) {
  if (cfg.n_rounds == 0) fail(ErrorCode::ConfigInvalid, "e91: n_rounds must be >= 1");
  DensityMatrix source = entangled::bell_density(BellLabel::PsiPlus);
  for (const auto& ch : cfg.source_noise) source = channels::apply_channel(source, ch, 1);

  const std::array<ObservableBasis, 3> alice{ObservableBasis::pauli_z(0), ObservableBasis::pauli_x(0),
                                             ObservableBasis::axis(0, {kInvSqrt2, 0, kInvSqrt2}, "(Z+X)/sqrt2")};
  const std::array<ObservableBasis, 3> bob{ObservableBasis::pauli_z(1),
                                           ObservableBasis::axis(1, {-kInvSqrt2, 0, kInvSqrt2}, "(Z-X)/sqrt2"),
                                           ObservableBasis::axis(1, {kInvSqrt2, 0, kInvSqrt2}, "(Z+X)/sqrt2")};
  std::array<std::array<std::array<double, 4>, 3>, 3> table{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::size_t k = 0;
      for (int sa : {+1, -1})
        for (int sb : {+1, -1})
          table[i][j][k++] =
              std::max(0.0, linalg::trace(alice[i].projector(sa, 2) * bob[j].projector(sb, 2) * source.matrix()).real());
    }

  // Row of the CHSH count table for each basis pair, or -1.
  auto chsh_row = [](std::size_t i, std::size_t j) -> int {
    if (i == 0 && j == 1) return 0;
    if (i == 0 && j == 2) return 1;
    if (i == 1 && j == 1) return 2;
    if (i == 1 && j == 2) return 3;
    return -1;
  };
  auto is_key = [](std::size_t i, std::size_t j) { return (i == 0 && j == 0) || (i == 2 && j == 1); };

  E91Result res;
  for (std::uint64_t r = 0; r < cfg.n_rounds; ++r) {
    const auto i = static_cast<std::size_t>(rng.below(3));
    const auto j = static_cast<std::size_t>(rng.below(3));
    const auto& p = table[i][j];
    const double u = rng.uniform() * (p[0] + p[1] + p[2] + p[3]);
    std::size_t k = 0;
    double acc = p[0];
    while (k < 3 && u >= acc) acc += p[++k];
    const int a_bit = static_cast<int>(k >> 1), b_bit = static_cast<int>(k & 1);
    if (is_key(i, j)) {
      ++res.classes.key;
      res.key_report.kept_indices.push_back(static_cast<std::size_t>(r));
      res.key_report.alice_sifted.push_back(a_bit);
      res.key_report.bob_sifted.push_back(1 - b_bit);  // anti-correlated pairs: Bob flips
    } else if (const int row = chsh_row(i, j); row >= 0) {
      ++res.classes.chsh;
      res.counts[static_cast<std::size_t>(row)][k] += 1.0;
    } else {
      ++res.classes.discard;
    }
  }
  auto& kr = res.key_report;
  for (std::size_t k = 0; k < kr.alice_sifted.size(); ++k)
    if (kr.alice_sifted[k] != kr.bob_sifted[k]) ++kr.mismatch_count;
  kr.detection_flag = kr.mismatch_count > 0;
  kr.final_key_alice = kr.alice_sifted;
  kr.final_key_bob = kr.bob_sifted;

  const entangled::ChshSetting setting{alice[0], alice[1], bob[1], bob[2], {+1, +1, +1, -1}, "e91"};
  res.chsh_analytic = entangled::chsh_value(source, setting);
  bool all_rows = true;
  for (const auto& row : res.counts) all_rows = all_rows && (row[0] + row[1] + row[2] + row[3]) > 0;
  res.chsh = all_rows ? entangled::chsh_from_counts(res.counts, setting.signs) : std::numeric_limits<double>::quiet_NaN();
  return res;
}

}  // namespace qnet::protocols
