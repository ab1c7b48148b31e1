#include "qnet/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qnet/error.hpp"

namespace qnet::cli {

const std::vector<Command>& commands() {
  auto keys = [](std::initializer_list<const char*> ks) {
    std::vector<Shortcut> out;
    for (const char* k : ks) {
      std::string flag = k;
      for (char& c : flag)
        if (c == '_') c = '-';
      out.push_back({flag, k, "sets the " + std::string(k) + " key"});
    }
    return out;
  };
  static const std::vector<Command> kCommands{
      {"state", "prepare a register, apply gates and noise, measure", true, Format::Jsonl,
       keys({"prepare", "shots"}), "", parse_state},
      {"chsh", "CHSH value of a Bell pair, sampled estimate and the CHSH game", true, Format::Jsonl,
       keys({"state", "setting", "rounds"}), "", parse_chsh},
      {"teleport", "teleport random or fixed inputs through a Bell pair", true, Format::Jsonl,
       keys({"trials", "resource", "distance_m", "trace"}), "", parse_teleport},
      {"bb84", "prepare-and-measure key distribution with optional eavesdropper", true, Format::Jsonl,
       keys({"n", "eve", "test_fraction", "test_count", "runs", "key_bits"}), "", parse_bb84},
      {"e91", "entanglement-based key distribution with a CHSH check", true, Format::Jsonl, keys({"rounds"}), "",
       parse_e91},
      {"swap", "entanglement swapping of two link pairs", true, Format::Jsonl, keys({"trials"}), "", parse_swap},
      {"purify", "one purification round and the fidelity recurrence", true, Format::Jsonl,
       keys({"fidelity", "fidelity2", "trials", "rounds"}), "", parse_purify},
      {"link", "heralded link generation, attempt traces and link cost", true, Format::Jsonl,
       keys({"architecture", "length_km", "attempts", "generations", "monte_carlo_trials", "threshold_fidelity"}), "",
       parse_link},
      {"route", "least-cost route between two nodes", false, Format::Jsonl, keys({"src", "dst", "f_min"}), "",
       parse_route},
      {"net", "end-to-end delivery or multiplexed throughput on a topology", true, Format::Jsonl,
       keys({"mode", "scheme", "horizon_s"}), "", parse_net},
      {"optics", "fiber, laser and photon-source calculations", false, Format::Jsonl,
       keys({"nf", "nc", "ni", "nr", "theta_deg", "gain", "pump", "loss", "stim", "db", "p_in", "p_out", "mean",
             "kmax", "alpha", "length_km", "rate_hz", "power_w", "wavelength_m", "transmit_fraction", "x"}),
       "calc", parse_optics},
      {"reproduce", "recompute the reference numbers and compare", true, Format::Table, keys({"rounds"}), "",
       parse_reproduce},
  };
  return kCommands;
}

namespace {

struct Options {
  std::string config;
  std::string seed;
  std::string format;
  std::string out;
  std::vector<std::string> sets;
  bool dry_run = false;
  std::string effective_config;
  std::string positional;
  std::map<std::string, std::string> shortcuts;  // key -> value
};

bool input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidProbability:
    case ErrorCode::NegativeInput:
    case ErrorCode::InvalidIndices:
    case ErrorCode::NoTIRPossible:
    case ErrorCode::NonPositivePower:
    case ErrorCode::NegativeMean:
    case ErrorCode::InvalidSize:
    case ErrorCode::InvalidGraph:
    case ErrorCode::NonUnitVector:
    case ErrorCode::FrequencyMismatch:
    case ErrorCode::ZeroDenominator:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qnet: quantum network simulator"};
  app.require_subcommand(1);
  std::map<std::string, Options> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    auto& o = opts[cmd.name];
    sub->add_option("-c,--config", o.config, "scenario file (YAML)");
    sub->add_option("--seed", o.seed, "master seed; overrides QNET_SEED and the file");
    sub->add_option("--format", o.format, "jsonl, csv or table");
    sub->add_option("-o,--out", o.out, "output file ('-' for stdout)");
    sub->add_option("--set", o.sets, "override any key: path.to.key=value")->allow_extra_args(false);
    sub->add_flag("--dry-run", o.dry_run, "print the effective configuration and stop");
    sub->add_option("--effective-config", o.effective_config, "also write the effective configuration here");
    if (!cmd.positional_key.empty()) sub->add_option(cmd.positional_key, o.positional, "sets the " + cmd.positional_key + " key");
    for (const auto& sc : cmd.shortcuts) {
      const std::string key = sc.key;
      sub->add_option_function<std::string>(
          "--" + sc.flag, [&o, key](const std::string& v) { o.shortcuts[key] = v; }, sc.help);
    }
    subs[cmd.name] = sub;
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (subs[c.name]->parsed()) cmd = &c;
  Options& o = opts[cmd->name];

  std::uint64_t seed = 0;
  std::string out_path;
  Format format = cmd->default_format;
  Runner runner;
  YAML::Node effective;
  try {
    YAML::Node root = o.config.empty() ? YAML::Node(YAML::NodeType::Map) : load_yaml_file(o.config);
    if (const char* env = std::getenv("QNET_SEED"); env && *env) apply_override(root, "seed", env);
    if (!o.seed.empty()) apply_override(root, "seed", o.seed);
    if (!o.positional.empty()) apply_override(root, cmd->name + "." + cmd->positional_key, o.positional);
    for (const auto& [key, value] : o.shortcuts) apply_override(root, cmd->name + "." + key, value);
    for (const auto& kv : o.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("command line: --set expects path=value, got '" + kv + "'");
      apply_override(root, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.format.empty()) apply_override(root, "output.format", o.format);
    if (!o.out.empty()) apply_override(root, "output.path", o.out);

    Section top(root, "", o.config.empty() ? "command line" : o.config);
    seed = top.count("seed", 0);
    auto output = top.child("output");
    out_path = output.text("path", "-");
    format = output.choice<Format>("format", to_string(cmd->default_format), parse_format);
    auto section = top.child(cmd->name);
    runner = cmd->parse(section);
    top.check_unknown();
    effective = top.effective();
  } catch (const ConfigError& e) {
    err << "qnet: config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "qnet: config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  if (!o.effective_config.empty()) {
    std::ofstream f(o.effective_config);
    if (!f) {
      err << "qnet: config error: cannot write " << o.effective_config << "\n";
      return kExitConfigError;
    }
    f << emit_yaml(effective);
  }
  if (o.dry_run) {
    out << emit_yaml(effective);
    return kExitOk;
  }

  if (cmd->randomized) err << "seed: " << seed << "\n";
  Sink sink;
  sink.add({{"record", "run"}, {"schema", kSchemaVersion}, {"command", cmd->name}, {"seed", seed}});
  Context ctx{seed, RngStream(seed), sink};
  int status = kExitOk;
  try {
    runner(ctx);
  } catch (const Error& e) {
    if (input_error(e.code())) {
      err << "qnet: config error: " << e.what() << "\n";
      return kExitConfigError;
    }
    err << "qnet: simulation failure: " << e.what() << "\n";
    sink.add({{"record", "error"}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}});
    status = kExitSimulationFailure;
  }

  if (out_path == "-") {
    sink.write(out, format);
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "qnet: config error: output.path: cannot write " << out_path << "\n";
      return kExitConfigError;
    }
    sink.write(f, format);
  }
  return status;
}

}  // namespace qnet::cli
