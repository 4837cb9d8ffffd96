// Command-line front end. Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavmec/uavmec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ApiFailure {
  uavmec_status status;
};

int exit_code(uavmec_status s) {
  switch (s) {
    case UAVMEC_OK: return kExitOk;
    case UAVMEC_ERR_CONFIG:
    case UAVMEC_ERR_DOMAIN:
    case UAVMEC_ERR_SHAPE:
    case UAVMEC_ERR_INVALID_DECISION:
    case UAVMEC_ERR_INFEASIBLE:
    case UAVMEC_ERR_REFUSED:
    case UAVMEC_ERR_NULL_ARGUMENT:
      return kExitConfig;
    case UAVMEC_ERR_NUMERIC: return kExitNumeric;
    default: return kExitFailure;
  }
}

void check(uavmec_status s) {
  if (s != UAVMEC_OK) {
    std::cerr << "error (" << uavmec_status_name(s) << "): " << uavmec_last_error() << "\n";
    throw ApiFailure{s};
  }
}

std::string take(char* s) {
  std::string out = s ? s : "";
  uavmec_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error (io): cannot open " << path << "\n";
    throw ApiFailure{UAVMEC_ERR_IO};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_or_print(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(*path);
  if (!out) {
    std::cerr << "error (io): cannot write " << *path << "\n";
    throw ApiFailure{UAVMEC_ERR_IO};
  }
  out << text << "\n";
}

struct Globals {
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> out;
};

struct ExperimentFlags {
  std::string spec_path;
  std::optional<std::string> policy;
  std::optional<int> episodes;
  std::optional<std::string> checkpoint;
  std::optional<std::string> axis;
  std::vector<double> values;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool spec_required) {
  auto* spec = cmd->add_option("spec", f.spec_path, "experiment spec (JSON)");
  if (spec_required) spec->required();
  cmd->add_option("--policy", f.policy, "learned | random_trajectory | all_offload | all_local");
  cmd->add_option("--episodes", f.episodes, "training episodes");
  cmd->add_option("--checkpoint", f.checkpoint, "reuse trained actors from checkpoint.json");
}

uavmec_experiment* make_experiment(const ExperimentFlags& f, const Globals& g) {
  uavmec_experiment* exp = nullptr;
  if (f.spec_path.empty()) check(uavmec_experiment_create("{}", &exp));
  else check(uavmec_experiment_load(f.spec_path.c_str(), &exp));
  try {
    if (!g.seeds.empty()) check(uavmec_experiment_set_seeds(exp, g.seeds.data(), g.seeds.size()));
    if (g.out) check(uavmec_experiment_set_output_dir(exp, g.out->c_str()));
    if (f.policy) check(uavmec_experiment_set_policy(exp, f.policy->c_str()));
    if (f.episodes) check(uavmec_experiment_set_episodes(exp, *f.episodes));
    if (f.checkpoint) check(uavmec_experiment_set_checkpoint(exp, f.checkpoint->c_str()));
    if (f.axis) check(uavmec_experiment_set_sweep(exp, f.axis->c_str(), f.values.data(), f.values.size()));
  } catch (...) {
    uavmec_experiment_free(exp);
    throw;
  }
  return exp;
}

std::string cell(const nlohmann::json& v) {
  if (v.is_null()) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
  return buf;
}

void print_experiment(const std::string& json_text, const std::string& out_dir) {
  const auto j = nlohmann::json::parse(json_text);
  std::cout << "policy " << j.at("policy").get<std::string>() << ", axis "
            << j.at("axis").get<std::string>() << ", fingerprint "
            << j.at("fingerprint").get<std::string>() << "\n";
  std::cout << "axis_value  seed  overall_dor  eval_reward  final_reward_mean\n";
  for (const auto& p : j.at("points"))
    for (const auto& r : p.at("runs"))
      std::cout << cell(p.at("axis_value")) << "  " << r.at("seed").get<std::uint64_t>() << "  "
                << cell(r.at("overall_dor")) << "  " << cell(r.at("eval_reward")) << "  "
                << cell(r.at("final_reward_mean")) << "\n";
  std::cout << "artifacts in " << out_dir << "\n";
}

int run_experiment(const ExperimentFlags& f, const Globals& g, uavmec_run_mode mode) {
  uavmec_experiment* exp = make_experiment(f, g);
  char* summary = nullptr;
  char* spec = nullptr;
  const uavmec_status s = uavmec_experiment_run(exp, mode, &summary);
  if (s == UAVMEC_OK) check(uavmec_experiment_spec(exp, &spec));
  uavmec_experiment_free(exp);
  check(s);
  const auto resolved = nlohmann::json::parse(take(spec));
  print_experiment(take(summary), resolved.at("output_dir").get<std::string>());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV-assisted edge computing simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seeds, "replicate seed(s); overrides the experiment file")->expected(1, -1);
  app.add_option("--out", g.out, "output directory or file");
  app.set_version_flag("--version", std::string(uavmec_version()));

  ExperimentFlags run_f, train_f, eval_f, sweep_f;
  auto* run_cmd = app.add_subcommand("run", "train if needed, then evaluate");
  add_experiment_flags(run_cmd, run_f, false);
  auto* train_cmd = app.add_subcommand("train", "train and write checkpoints");
  add_experiment_flags(train_cmd, train_f, false);
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a policy (learned ones need --checkpoint)");
  add_experiment_flags(eval_cmd, eval_f, false);
  auto* sweep_cmd = app.add_subcommand("sweep", "run over a sweep axis");
  add_experiment_flags(sweep_cmd, sweep_f, false);
  sweep_cmd->add_option("--axis", sweep_f.axis, "num_users | uav_freq | user_freq");
  sweep_cmd->add_option("--values", sweep_f.values, "sweep values (Hz for frequencies)")->delimiter(',');

  std::vector<std::string> compare_dirs;
  auto* compare_cmd = app.add_subcommand("compare", "compare run directories (first is the candidate)");
  compare_cmd->add_option("runs", compare_dirs, "run directories")->required()->expected(2, -1);

  std::string alloc_input;
  bool alloc_oracle = false;
  auto* alloc_cmd = app.add_subcommand("alloc", "solve one slot: offloading and resource shares");
  alloc_cmd->add_option("context", alloc_input, "slot context or scenario snapshot (JSON)")->required();
  alloc_cmd->add_flag("--oracle", alloc_oracle, "also run the exhaustive search");

  int oracle_instances = 500;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "closed-form shares vs numeric solver");
  oracle_cmd->add_option("--instances", oracle_instances, "random instances")->check(CLI::PositiveNumber);

  std::optional<std::string> snap_config;
  std::optional<int> snap_slot;
  std::uint64_t snap_stream = 0;
  auto* snap_cmd = app.add_subcommand("snapshot", "write a scenario snapshot or slot context");
  snap_cmd->add_option("--config", snap_config, "JSON with optional scenario/channel objects");
  snap_cmd->add_option("--slot", snap_slot, "emit the slot context of this slot instead");
  snap_cmd->add_option("--stream", snap_stream, "task stream for --slot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_experiment(run_f, g, UAVMEC_MODE_RUN);
    if (*train_cmd) return run_experiment(train_f, g, UAVMEC_MODE_TRAIN);
    if (*eval_cmd) return run_experiment(eval_f, g, UAVMEC_MODE_EVAL);
    if (*sweep_cmd) return run_experiment(sweep_f, g, UAVMEC_MODE_RUN);

    if (*compare_cmd) {
      std::vector<const char*> dirs;
      for (const auto& d : compare_dirs) dirs.push_back(d.c_str());
      char* out = nullptr;
      check(uavmec_compare(dirs.data(), dirs.size(), g.out ? g.out->c_str() : nullptr, &out));
      std::cout << take(out) << "\n";
      return kExitOk;
    }
    if (*alloc_cmd) {
      const std::string text = read_text(alloc_input);
      char* out = nullptr;
      check(uavmec_allocate(text.c_str(), alloc_oracle ? 1 : 0, &out));
      write_or_print(g.out, take(out));
      return kExitOk;
    }
    if (*oracle_cmd) {
      char* out = nullptr;
      check(uavmec_oracle_check(g.seeds.empty() ? 1 : g.seeds.front(), oracle_instances, &out));
      const std::string text = take(out);
      std::cout << text << "\n";
      return nlohmann::json::parse(text).at("passed").get<bool>() ? kExitOk : kExitNumeric;
    }
    if (*snap_cmd) {
      const std::string config = snap_config ? read_text(*snap_config) : "{}";
      uavmec_scenario* scn = nullptr;
      check(uavmec_scenario_create(config.c_str(), g.seeds.empty() ? 1 : g.seeds.front(), &scn));
      char* out = nullptr;
      const uavmec_status s = snap_slot ? uavmec_scenario_slot_context(scn, *snap_slot, snap_stream, &out)
                                        : uavmec_scenario_snapshot(scn, &out);
      uavmec_scenario_free(scn);
      check(s);
      write_or_print(g.out, take(out));
      return kExitOk;
    }
  } catch (const ApiFailure& f) {
    return exit_code(f.status);
  }
  return kExitOk;
}
