#include <cmath>

#include "commands.hpp"
#include "qnet/error.hpp"
#include "qnet/protocols.hpp"

namespace qnet::cli {
namespace {

// "eigenvalue" writes 1 for a +1 outcome (|0> or |+>), the complement of the
// encoding bit.
std::string key_text(const std::vector<int>& bits, bool eigenvalue) {
  std::string s = bits_text(bits);
  if (eigenvalue)
    for (char& c : s) c = c == '0' ? '1' : '0';
  return s;
}

std::optional<std::string> bit_string(Section& s, const std::string& key, std::uint64_t n) {
  auto v = s.optional_text(key);
  if (!v) return v;
  if (v->size() != n) s.error(key, "length " + std::to_string(v->size()) + " does not match n = " + std::to_string(n));
  for (char c : *v)
    if (c != '0' && c != '1') s.error(key, "expected only 0 and 1");
  return v;
}

}  // namespace

Runner parse_bb84(Section& s) {
  protocols::Bb84Config cfg;
  cfg.n = s.count("n", 1000);
  if (cfg.n < 1) s.error("n", "must be >= 1");
  cfg.eve = s.choice<protocols::EveMode>("eve", "absent",
                                         [](const std::string& t) { return protocols::parse_eve_mode(t); });
  cfg.eve_fraction = s.number("eve_fraction", 1.0);
  if (cfg.eve_fraction < 0.0 || cfg.eve_fraction > 1.0) s.error("eve_fraction", "must be in [0, 1]");
  cfg.test_fraction = s.number("test_fraction", 0.5);
  if (cfg.test_fraction < 0.0 || cfg.test_fraction >= 1.0) s.error("test_fraction", "must be in [0, 1)");
  cfg.test_count = s.optional_count("test_count");
  cfg.channel_flip_probability = s.number("channel_flip_probability", 0.0);
  if (cfg.channel_flip_probability < 0.0 || cfg.channel_flip_probability > 1.0)
    s.error("channel_flip_probability", "must be in [0, 1]");
  cfg.abort_mismatch_fraction = s.optional_number("abort_mismatch_fraction");
  cfg.alice_bits = bit_string(s, "alice_bits", cfg.n);
  cfg.alice_bases = bit_string(s, "alice_bases", cfg.n);
  cfg.bob_bases = bit_string(s, "bob_bases", cfg.n);
  const auto runs = s.count("runs", 1);
  if (runs < 1) s.error("runs", "must be >= 1");
  const std::string convention = s.text("key_bits", "encoding");
  if (convention != "encoding" && convention != "eigenvalue") s.error("key_bits", "expected encoding or eigenvalue");
  const bool eig = convention == "eigenvalue";

  return [=](Context& ctx) {
    std::uint64_t sifted = 0, tests = 0, mismatches = 0, detected = 0, aborted = 0;
    double expected_detection = 0.0;
    for (std::uint64_t r = 0; r < runs; ++r) {
      auto rng = ctx.rng.split(r);
      const auto rep = protocols::bb84(cfg, rng);
      sifted += rep.kept_indices.size();
      tests += rep.test_count;
      mismatches += rep.mismatch_count;
      detected += rep.detection_flag ? 1 : 0;
      aborted += rep.aborted ? 1 : 0;
      expected_detection += 1.0 - std::pow(1.0 - cfg.eve_fraction / 4.0, static_cast<double>(rep.test_count));
      if (runs == 1)
        ctx.sink.add({{"record", "bb84"},
                      {"n", cfg.n},
                      {"eve", protocols::to_string(cfg.eve)},
                      {"key_bits", convention},
                      {"kept_positions", positions_text(rep.kept_indices)},
                      {"sifted_key_alice", key_text(rep.alice_sifted, eig)},
                      {"sifted_key_bob", key_text(rep.bob_sifted, eig)},
                      {"test_positions", positions_text(rep.test_indices)},
                      {"test_count", rep.test_count},
                      {"mismatches", rep.mismatch_count},
                      {"detected", rep.detection_flag},
                      {"aborted", rep.aborted},
                      {"final_key_alice", key_text(rep.final_key_alice, eig)},
                      {"final_key_bob", key_text(rep.final_key_bob, eig)}});
    }
    const double nr = static_cast<double>(runs);
    Record summary{{"record", "bb84_summary"},
                   {"runs", runs},
                   {"n", cfg.n},
                   {"eve", protocols::to_string(cfg.eve)},
                   {"mean_sifted_fraction", static_cast<double>(sifted) / (nr * static_cast<double>(cfg.n))},
                   {"test_bits", tests},
                   {"mismatch_rate", nullptr},
                   {"detection_rate", static_cast<double>(detected) / nr},
                   {"expected_detection", nullptr},
                   {"abort_rate", static_cast<double>(aborted) / nr}};
    if (tests > 0) summary["mismatch_rate"] = static_cast<double>(mismatches) / static_cast<double>(tests);
    if (cfg.eve == protocols::EveMode::InterceptResend && cfg.channel_flip_probability == 0.0)
      summary["expected_detection"] = expected_detection / nr;
    ctx.sink.add(summary);
  };
}

Runner parse_e91(Section& s) {
  protocols::E91Config cfg;
  cfg.n_rounds = s.count("rounds", 10000);
  if (cfg.n_rounds < 1) s.error("rounds", "must be >= 1");
  for (auto& item : s.list("noise")) cfg.source_noise.push_back(parse_channel(item));

  return [=](Context& ctx) {
    const auto res = protocols::e91(cfg, ctx.rng);
    const auto& k = res.key_report;
    std::size_t key_mismatch = 0;
    for (std::size_t i = 0; i < k.alice_sifted.size(); ++i) key_mismatch += k.alice_sifted[i] != k.bob_sifted[i];
    static const char* kPairs[4] = {"A1B2", "A1B3", "A2B2", "A2B3"};
    for (std::size_t r = 0; r < 4; ++r)
      ctx.sink.add({{"record", "e91_counts"},
                    {"pair", kPairs[r]},
                    {"pp", res.counts[r][0]},
                    {"pm", res.counts[r][1]},
                    {"mp", res.counts[r][2]},
                    {"mm", res.counts[r][3]}});
    const double n = static_cast<double>(cfg.n_rounds);
    Record r{{"record", "e91"},
             {"rounds", cfg.n_rounds},
             {"key_rounds", res.classes.key},
             {"chsh_rounds", res.classes.chsh},
             {"discard_rounds", res.classes.discard},
             {"key_fraction", static_cast<double>(res.classes.key) / n},
             {"chsh_fraction", static_cast<double>(res.classes.chsh) / n},
             {"discard_fraction", static_cast<double>(res.classes.discard) / n},
             {"chsh", nullptr},
             {"chsh_analytic", res.chsh_analytic},
             {"key_length", k.alice_sifted.size()},
             {"key_mismatches", key_mismatch}};
    if (std::isfinite(res.chsh)) r["chsh"] = res.chsh;
    ctx.sink.add(r);
  };
}

}  // namespace qnet::cli
