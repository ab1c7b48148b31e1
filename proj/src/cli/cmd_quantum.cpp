#include <cmath>
#include <map>
#include <numbers>

#include "commands.hpp"
#include "qnet/error.hpp"
#include "qnet/protocols.hpp"

namespace qnet::cli {
namespace {

using entangled::BellLabel;
using state::DensityMatrix;
using state::ObservableBasis;
using state::PureState;

struct QubitNoise {
  channels::NoiseChannel ch;
  std::size_t qubit;
};

std::vector<QubitNoise> parse_noise_list(Section& s, const std::string& key, std::size_t n_qubits) {
  std::vector<QubitNoise> out;
  for (auto& item : s.list(key)) {
    const auto q = item.count("qubit", 0);
    if (q >= n_qubits) item.error("qubit", "out of range for " + std::to_string(n_qubits) + " qubits");
    out.push_back({parse_channel(item), static_cast<std::size_t>(q)});
  }
  return out;
}

DensityMatrix with_noise(DensityMatrix rho, const std::vector<QubitNoise>& noise) {
  for (const auto& n : noise) rho = channels::apply_channel(rho, n.ch, n.qubit);
  return rho;
}

std::string bits_of(std::size_t index, std::size_t n) {
  std::string s;
  for (std::size_t q = 0; q < n; ++q) s += (index >> (n - 1 - q)) & 1 ? '1' : '0';
  return s;
}

// ---------------------------------------------------------------------------
// state

PureState parse_prepare(Section& s) {
  const std::string text = s.text("prepare", "0");
  auto sized = [&](const std::string& prefix) -> std::size_t {
    const std::string rest = text.substr(prefix.size());
    std::size_t n = 0;
    for (char c : rest) {
      if (c < '0' || c > '9') s.error("prepare", "expected a qubit count after '" + prefix + "'");
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  };
  try {
    if (text.rfind("bell:", 0) == 0) return entangled::bell_state(entangled::parse_bell_label(text.substr(5)));
    if (text.rfind("ghz:", 0) == 0) return entangled::ghz(sized("ghz:"));
    if (text.rfind("w:", 0) == 0) return entangled::w_state(sized("w:"));
  } catch (const Error& e) {
    s.error("prepare", e.what());
  }
  if (text.empty() || text.size() > 12) s.error("prepare", "expected 1 to 12 qubit symbols");
  std::optional<PureState> psi;
  for (char c : text) {
    PureState k = state::kets::zero();
    switch (c) {
      case '0': k = state::kets::zero(); break;
      case '1': k = state::kets::one(); break;
      case '+': k = state::kets::plus(); break;
      case '-': k = state::kets::minus(); break;
      case 'r': k = state::kets::plus_i(); break;
      case 'l': k = state::kets::minus_i(); break;
      default: s.error("prepare", std::string("unknown qubit symbol '") + c + "' (use 0 1 + - r l)");
    }
    psi = psi ? state::tensor(*psi, k) : k;
  }
  return *psi;
}

ObservableBasis parse_basis(Section& s, std::size_t qubit) {
  const std::string b = s.text("basis", "Z");
  if (b == "Z") return ObservableBasis::pauli_z(qubit);
  if (b == "X") return ObservableBasis::pauli_x(qubit);
  if (b == "Y") return ObservableBasis::pauli_y(qubit);
  if (b == "axis") {
    const auto a = s.numbers("axis");
    if (a.size() != 3) s.error("axis", "expected three components");
    try {
      return ObservableBasis::axis(qubit, {a[0], a[1], a[2]}, "axis");
    } catch (const Error& e) {
      s.error("axis", e.what());
    }
  }
  s.error("basis", "unknown basis '" + b + "' (Z, X, Y or axis)");
}

}  // namespace

Runner parse_state(Section& s) {
  const PureState prepared = parse_prepare(s);
  const std::size_t n = prepared.n_qubits();

  struct GateOp {
    std::string name;
    linalg::ComplexMatrix m;
    std::vector<std::size_t> targets;
  };
  std::vector<GateOp> ops;
  for (auto& g : s.list("gates")) {
    GateOp op;
    op.name = g.text("gate");
    if (op.name == "R") {
      const auto axis = g.numbers("axis");
      if (axis.size() != 3) g.error("axis", "expected three components");
      try {
        op.m = state::rotation_gate({axis[0], axis[1], axis[2]}, g.number("theta"));
      } catch (const Error& e) {
        g.error("axis", e.what());
      }
    } else {
      bool found = false;
      for (const auto& [name, m] : state::gates::table())
        if (name == op.name) {
          op.m = m;
          found = true;
        }
      if (!found) g.error("gate", "unknown gate '" + op.name + "'");
    }
    for (auto t : g.counts("targets")) {
      if (t >= n) g.error("targets", "qubit " + std::to_string(t) + " out of range");
      op.targets.push_back(static_cast<std::size_t>(t));
    }
    if ((std::size_t{1} << op.targets.size()) != op.m.rows())
      g.error("targets", "gate " + op.name + " needs " + std::to_string(linalg::qubit_count(op.m.rows())) + " targets");
    ops.push_back(std::move(op));
  }
  const auto noise = parse_noise_list(s, "noise", n);

  struct Meas {
    std::string label;
    ObservableBasis basis;
  };
  std::vector<Meas> meas;
  for (auto& m : s.list("measure")) {
    const auto q = m.count("qubit", 0);
    if (q >= n) m.error("qubit", "out of range");
    ObservableBasis b = parse_basis(m, static_cast<std::size_t>(q));
    meas.push_back({b.label(), b});
  }
  const auto shots = s.count("shots", 0);
  if (shots > 0 && meas.empty()) s.error("shots", "needs at least one entry under measure");

  auto mz = s.child("mach_zehnder");
  const bool run_mz = mz.flag("enabled", false);
  const bool block_lower = mz.flag("block_lower", false);
  if (run_mz && (n != 1 || !noise.empty())) mz.error_here("needs a single noiseless qubit");

  return [=](Context& ctx) {
    PureState psi = prepared;
    for (const auto& op : ops) psi = state::apply_gate(psi, op.m, linalg::QubitIndexSet(op.targets));
    const DensityMatrix rho = with_noise(DensityMatrix::from_pure(psi), noise);
    const bool pure = noise.empty();

    ctx.sink.add({{"record", "state"}, {"n_qubits", n}, {"pure", pure}, {"purity", state::purity(rho)}});
    for (std::size_t i = 0; i < rho.dim(); ++i) {
      if (pure)
        ctx.sink.add({{"record", "amplitude"},
                      {"index", i},
                      {"bits", bits_of(i, n)},
                      {"re", psi[i].real()},
                      {"im", psi[i].imag()},
                      {"probability", std::norm(psi[i])}});
      else
        ctx.sink.add({{"record", "probability"}, {"index", i}, {"bits", bits_of(i, n)}, {"probability", rho(i, i).real()}});
    }
    for (std::size_t q = 0; q < n; ++q) {
      const DensityMatrix red = n == 1 ? rho : entangled::partial_trace(rho, {q});
      const auto b = state::bloch_coordinates(red);
      ctx.sink.add({{"record", "qubit"}, {"qubit", q}, {"x", b.x}, {"y", b.y}, {"z", b.z}, {"purity", state::purity(red)}});
    }
    for (const auto& m : meas) {
      const auto [pp, pm] = state::outcome_probabilities(rho, m.basis);
      ctx.sink.add({{"record", "measurement"},
                    {"basis", m.label},
                    {"p_plus", pp},
                    {"p_minus", pm},
                    {"expectation", state::expectation(rho, m.basis)}});
    }
    if (shots > 0) {
      std::map<std::string, std::uint64_t> tally;
      for (std::uint64_t k = 0; k < shots; ++k) {
        DensityMatrix cur = rho;
        std::string word;
        for (const auto& m : meas) {
          auto rec = state::measure(cur, m.basis, ctx.rng);
          word += rec.outcome > 0 ? '+' : '-';
          cur = std::move(rec.post_state);
        }
        ++tally[word];
      }
      for (const auto& [word, c] : tally)
        ctx.sink.add({{"record", "shots"},
                      {"outcomes", word},
                      {"count", c},
                      {"frequency", static_cast<double>(c) / static_cast<double>(shots)}});
    }
    if (run_mz) {
      const auto o = state::mach_zehnder(psi, block_lower);
      ctx.sink.add({{"record", "mach_zehnder"}, {"block_lower", block_lower}, {"d0", o.d0}, {"d1", o.d1}, {"absorbed", o.absorbed}});
    }
  };
}

// ---------------------------------------------------------------------------
// chsh

Runner parse_chsh(Section& s) {
  const BellLabel label = parse_label(s, "state", "PsiPlus");
  static const std::map<BellLabel, std::string> kPreset{{BellLabel::PhiPlus, "phi_plus"},
                                                       {BellLabel::PhiMinus, "phi_minus"},
                                                       {BellLabel::PsiPlus, "psi_plus"},
                                                       {BellLabel::PsiMinus, "psi_minus"}};
  const auto setting = s.choice<entangled::ChshSetting>(
      "setting", kPreset.at(label), [](const std::string& t) { return entangled::ChshSetting::preset(t); });
  const auto noise = parse_noise_list(s, "noise", 2);
  const auto rounds = s.count("rounds", 100000);

  std::optional<entangled::ChshCounts> table;
  const auto rows = s.list("table");
  if (!rows.empty()) {
    if (rows.size() != 4) s.error("table", "expected four rows (A1B1, A1B2, A2B1, A2B2)");
    entangled::ChshCounts t{};
    for (std::size_t r = 0; r < 4; ++r) {
      Section row = rows[r];
      t[r] = {row.number("pp"), row.number("pm"), row.number("mp"), row.number("mm")};
      for (double v : t[r])
        if (v < 0.0) row.error_here("counts must be non-negative");
    }
    table = t;
  }

  auto game = s.child("game");
  const auto strategy = game.choice<protocols::GameStrategy>(
      "strategy", "quantum", [](const std::string& t) { return protocols::parse_game_strategy(t); });
  const auto game_rounds = game.count("rounds", 0);

  return [=](Context& ctx) {
    const DensityMatrix rho = with_noise(entangled::bell_density(label), noise);
    const auto corr = entangled::chsh_correlators(rho, setting);
    static const char* kPairs[4] = {"A1B1", "A1B2", "A2B1", "A2B2"};
    for (std::size_t k = 0; k < 4; ++k)
      ctx.sink.add({{"record", "chsh_correlator"}, {"pair", kPairs[k]}, {"sign", setting.signs[k]}, {"correlator", corr[k]}});
    Record r{{"record", "chsh"},
             {"state", entangled::to_string(label)},
             {"setting", setting.name},
             {"analytic", entangled::chsh_value(rho, setting)},
             {"rounds", rounds},
             {"sampled", nullptr}};
    if (rounds > 0) {
      auto rng = ctx.rng.split(1);
      r["sampled"] = entangled::chsh_from_counts(entangled::sample_chsh_counts(rho, setting, rounds, rng), setting.signs);
    }
    ctx.sink.add(r);
    if (table)
      ctx.sink.add({{"record", "chsh_table"}, {"value", entangled::chsh_from_counts(*table, setting.signs)}});

    Record g{{"record", "chsh_game"},
             {"strategy", protocols::to_string(strategy)},
             {"analytic", protocols::chsh_game_win_probability(strategy)},
             {"rounds", game_rounds},
             {"win_rate", nullptr}};
    if (game_rounds > 0) {
      auto rng = ctx.rng.split(2);
      g["win_rate"] = protocols::chsh_game(strategy, game_rounds, rng).win_rate();
    }
    ctx.sink.add(g);
  };
}

// ---------------------------------------------------------------------------
// teleport

Runner parse_teleport(Section& s) {
  const auto theta = s.optional_number("input_theta");
  const auto phi = s.optional_number("input_phi");
  if (phi && !theta) s.error("input_phi", "given without input_theta");
  const auto trials = s.count("trials", 10000);
  if (trials < 1) s.error("trials", "must be >= 1");
  const BellLabel label = parse_label(s, "resource", "PhiPlus");
  const auto noise = parse_noise_list(s, "resource_noise", 2);
  const double distance = s.number("distance_m", 0.0);
  if (distance < 0.0) s.error("distance_m", "must be >= 0");
  const bool trace = s.flag("trace", false);

  return [=](Context& ctx) {
    const DensityMatrix resource = with_noise(entangled::bell_density(label), noise);
    std::array<std::uint64_t, 4> counts{};
    double sum_f = 0.0, min_f = 1.0, max_dev = 0.0, latency = 0.0;
    const linalg::ComplexMatrix half = DensityMatrix::maximally_mixed(1).matrix();
    for (std::uint64_t t = 0; t < trials; ++t) {
      double th = theta.value_or(0.0), ph = phi.value_or(0.0);
      if (!theta) {
        th = std::acos(1.0 - 2.0 * ctx.rng.uniform());
        ph = 2.0 * std::numbers::pi * ctx.rng.uniform();
      }
      const PureState in = PureState::from_bloch_angles(th, ph);
      const auto out = protocols::teleport(DensityMatrix::from_pure(in), resource, ctx.rng, label, distance);
      const double f = state::fidelity(out.bob_state, in);
      sum_f += f;
      min_f = std::min(min_f, f);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          max_dev = std::max(max_dev, std::abs(out.bob_unconditioned.matrix()(i, j) - half(i, j)));
      latency = out.message_latency_s;
      ++counts[static_cast<std::size_t>(out.bsm_label)];
      if (trace)
        ctx.sink.add({{"record", "teleport_trial"},
                      {"trial", t},
                      {"theta", th},
                      {"phi", ph},
                      {"outcome", entangled::to_string(out.bsm_label)},
                      {"bits", std::to_string(out.classical_bits[0]) + std::to_string(out.classical_bits[1])},
                      {"correction", out.correction.word()},
                      {"fidelity", f}});
    }
    for (auto l : entangled::kBellLabels) {
      const auto c = counts[static_cast<std::size_t>(l)];
      ctx.sink.add({{"record", "teleport_outcome"},
                    {"outcome", entangled::to_string(l)},
                    {"count", c},
                    {"frequency", static_cast<double>(c) / static_cast<double>(trials)}});
    }
    ctx.sink.add({{"record", "teleport"},
                  {"trials", trials},
                  {"resource", entangled::to_string(label)},
                  {"mean_fidelity", sum_f / static_cast<double>(trials)},
                  {"min_fidelity", min_f},
                  {"max_unconditioned_deviation", max_dev},
                  {"message_latency_s", latency}});
  };
}

// ---------------------------------------------------------------------------
// swap

namespace {

struct PairSpec {
  BellLabel label;
  double fidelity;
  DensityMatrix state() const {
    return protocols::apply_frame(protocols::bitflip_pair(fidelity), protocols::PauliFrame::of(label), 1);
  }
};

PairSpec parse_pair(Section& parent, const std::string& key) {
  auto s = parent.child(key);
  PairSpec p{parse_label(s, "label", "PhiPlus"), s.number("fidelity", 1.0)};
  if (p.fidelity < 0.0 || p.fidelity > 1.0) s.error("fidelity", "must be in [0, 1]");
  return p;
}

}  // namespace

Runner parse_swap(Section& s) {
  const PairSpec ab = parse_pair(s, "ab");
  const PairSpec bc = parse_pair(s, "bc");
  const auto trials = s.count("trials", 1000);

  return [=](Context& ctx) {
    using protocols::PauliFrame;
    const DensityMatrix rab = ab.state(), rbc = bc.state();
    const auto fab = PauliFrame::of(ab.label), fbc = PauliFrame::of(bc.label);
    const PureState target = entangled::bell_state(BellLabel::PhiPlus);
    double expected = 0.0;
    for (auto o : entangled::kBellLabels) {
      Record r{{"record", "swap_branch"}, {"outcome", entangled::to_string(o)}, {"probability", 0.0},
               {"frame", nullptr},        {"nominal_state", nullptr},            {"fidelity", nullptr}};
      try {
        const auto b = protocols::entanglement_swap_branch(rab, rbc, o, fab, fbc);
        const double f = state::fidelity(b.corrected, target);
        expected += b.probability * f;
        r["probability"] = b.probability;
        r["frame"] = b.frame.word();
        r["nominal_state"] = entangled::to_string(b.frame.label());
        r["fidelity"] = f;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroProbabilityBranch) throw;
      }
      ctx.sink.add(r);
    }
    double sum_f = 0.0;
    std::array<std::uint64_t, 4> counts{};
    for (std::uint64_t t = 0; t < trials; ++t) {
      const auto o = protocols::entanglement_swap(rab, rbc, ctx.rng, fab, fbc);
      sum_f += state::fidelity(o.corrected, target);
      ++counts[static_cast<std::size_t>(o.outcome)];
    }
    for (auto l : entangled::kBellLabels)
      ctx.sink.add({{"record", "swap_outcome"},
                    {"outcome", entangled::to_string(l)},
                    {"count", counts[static_cast<std::size_t>(l)]}});
    Record summary{{"record", "swap"},
                   {"fidelity_ab", ab.fidelity},
                   {"fidelity_bc", bc.fidelity},
                   {"expected_fidelity", expected},
                   {"trials", trials},
                   {"mean_fidelity", nullptr}};
    if (trials > 0) summary["mean_fidelity"] = sum_f / static_cast<double>(trials);
    ctx.sink.add(summary);
  };
}

// ---------------------------------------------------------------------------
// purify

Runner parse_purify(Section& s) {
  const double f1 = s.number("fidelity", 0.8);
  const double f2 = s.number("fidelity2", f1);
  for (auto [k, v] : {std::pair{"fidelity", f1}, std::pair{"fidelity2", f2}})
    if (v < 0.0 || v > 1.0) s.error(k, "must be in [0, 1]");
  const auto trials = s.count("trials", 10000);
  const auto rounds = s.count("rounds", 5);
  if (rounds > 200) s.error("rounds", "must be <= 200");

  return [=](Context& ctx) {
    const DensityMatrix p1 = protocols::bitflip_pair(f1), p2 = protocols::bitflip_pair(f2);
    const auto exact = protocols::purify_exact(p1, p2);
    const double kept_f = state::fidelity(exact.kept_state, entangled::bell_state(BellLabel::PhiPlus));
    std::uint64_t kept = 0;
    for (std::uint64_t t = 0; t < trials; ++t) kept += protocols::purify(p1, p2, ctx.rng).kept ? 1 : 0;
    Record r{{"record", "purify"},
             {"fidelity", f1},
             {"fidelity2", f2},
             {"keep_probability", exact.keep_probability},
             {"kept_fidelity", kept_f},
             {"trials", trials},
             {"sampled_keep_rate", nullptr},
             {"sigma", nullptr}};
    if (trials > 0) {
      const double p = exact.keep_probability;
      r["sampled_keep_rate"] = static_cast<double>(kept) / static_cast<double>(trials);
      r["sigma"] = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
    ctx.sink.add(r);
    double f = f1;
    for (std::uint64_t k = 1; k <= rounds; ++k) {
      const auto step = protocols::purification_recurrence(f);
      f = step.fidelity;
      ctx.sink.add({{"record", "recurrence"}, {"round", k}, {"keep_probability", step.keep_probability}, {"fidelity", f}});
    }
  };
}

}  // namespace qnet::cli
