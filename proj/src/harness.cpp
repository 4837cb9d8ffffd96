#include "uavmec/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "field_reader.hpp"
#include "uavmec/allocator.hpp"
#include "uavmec/error.hpp"
#include "uavmec/trainer.hpp"

namespace uavmec {
namespace {

using detail::FieldReader;
using detail::schema_error;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string point_label(SweepAxis axis, double value) {
  char buf[64];
  switch (axis) {
    case SweepAxis::kNone:
      return "";
    case SweepAxis::kNumUsers:
      std::snprintf(buf, sizeof buf, "num_users_%d", static_cast<int>(value));
      return buf;
    case SweepAxis::kUavFreq:
      std::snprintf(buf, sizeof buf, "uav_freq_%gGHz", value / 1e9);
      return buf;
    case SweepAxis::kUserFreq:
      std::snprintf(buf, sizeof buf, "user_freq_%gGHz", value / 1e9);
      return buf;
  }
  return "";
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::string text_;
};

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kRun: return "run";
    case RunMode::kTrain: return "train";
    case RunMode::kEval: return "eval";
  }
  return "run";
}

bool needs_learner(PolicyKind p) { return p == PolicyKind::kLearned || p == PolicyKind::kAllOffload; }

void write_episodes(const std::filesystem::path& dir, const TrainingHistory& h) {
  Csv csv({"episode", "cumulative_reward", "mean_dor", "violations"});
  for (const EpisodeRecord& e : h.episodes) csv.row(e.episode, e.cumulative_reward, e.mean_dor, e.violations);
  write_file_atomic(dir / "episodes.csv", csv.text());
}

void write_rollout(const std::filesystem::path& dir, const Rollout& r) {
  Csv slots({"slot", "dor", "reward", "penalty", "violating_uavs", "cd_sweeps", "offloaded_users"});
  Csv users({"slot", "user", "choice", "delay_s", "contribution"});
  for (const SlotRecord& s : r.slots) {
    const int offloaded = static_cast<int>(
        std::count_if(s.assignment.begin(), s.assignment.end(), [](int c) { return c != kLocal; }));
    slots.row(s.slot, s.dor, s.reward, s.penalty, s.violating_uavs, s.cd_iterations, offloaded);
    for (std::size_t m = 0; m < s.assignment.size(); ++m)
      users.row(s.slot, m, s.assignment[m], s.user_delay[m], s.user_contribution[m]);
  }
  Csv traj({"slot", "uav", "x", "y", "z"});
  for (std::size_t t = 0; t < r.positions.size(); ++t)
    for (std::size_t n = 0; n < r.positions[t].size(); ++n) {
      const Vec3& p = r.positions[t][n];
      traj.row(t, n, p.x(), p.y(), p.z());
    }
  write_file_atomic(dir / "slots.csv", slots.text());
  write_file_atomic(dir / "user_delays.csv", users.text());
  write_file_atomic(dir / "trajectory.csv", traj.text());
}

Maddpg load_checkpoint(const std::filesystem::path& path, const Scenario& scenario,
                       const TrainConfig& train) {
  Maddpg learner = learner_from_json(read_json_file(path));
  const int obs_dim = train.extended_observation ? 6 : 3;
  if (learner.num_agents() != scenario.config.num_uavs || learner.obs_dim() != obs_dim)
    throw Error(ErrorCode::kConfig, path.string() + ": checkpoint has " +
                                        std::to_string(learner.num_agents()) + " agents with " +
                                        std::to_string(learner.obs_dim()) +
                                        "-dim observations, scenario needs " +
                                        std::to_string(scenario.config.num_uavs) + " and " +
                                        std::to_string(obs_dim));
  return learner;
}

PointResult run_point(const ExperimentSpec& spec, RunMode mode, double value, std::uint64_t seed,
                      const std::filesystem::path& rel_dir, const std::string& fingerprint) {
  const std::filesystem::path dir = spec.output_dir / rel_dir;
  std::filesystem::create_directories(dir);
  const Scenario scenario = build_scenario(point_scenario(spec, value, seed), spec.channel);
  TrainConfig tcfg = spec.train;
  tcfg.seed = seed;

  PointResult out;
  out.axis_value = value;
  out.seed = seed;
  out.directory = rel_dir;

  std::optional<Maddpg> learner;
  std::optional<TrainingHistory> history;
  Json checkpoint_ref = nullptr;
  Json files = Json::array();

  if (needs_learner(spec.policy)) {
    if (spec.checkpoint) {
      learner.emplace(load_checkpoint(*spec.checkpoint, scenario, tcfg));
      checkpoint_ref = spec.checkpoint->generic_string();
    } else if (mode == RunMode::kEval) {
      throw Error(ErrorCode::kConfig, "eval of policy " + to_string(spec.policy) +
                                          " needs a checkpoint");
    } else {
      TrainResult trained = train(scenario, tcfg);
      write_file_atomic(dir / "checkpoint.json", dump(checkpoint_json(trained)));
      files.push_back("checkpoint.json");
      checkpoint_ref = "checkpoint.json";
      history = std::move(trained.history);
      learner.emplace(std::move(trained.learner));
    }
  } else if (spec.policy == PolicyKind::kRandomTrajectory && mode != RunMode::kEval) {
    history = random_trajectory_history(scenario, tcfg);
  }

  if (history) {
    write_episodes(dir, *history);
    files.push_back("episodes.csv");
    out.final_reward_mean = history->final_mean_reward(spec.reward_window);
  }

  if (mode != RunMode::kTrain) {
    const RolloutOptions options =
        policy_rollout_options(spec.policy, learner ? &*learner : nullptr, tcfg, seed);
    const Rollout r = rollout(scenario, options);
    write_rollout(dir, r);
    for (const char* f : {"slots.csv", "user_delays.csv", "trajectory.csv"}) files.push_back(f);
    out.overall_dor = r.overall_dor;
    out.eval_reward = r.cumulative_reward;
    for (const SlotRecord& s : r.slots) out.eval_violations += s.violating_uavs;
    if (!std::isfinite(r.overall_dor) || !std::isfinite(r.cumulative_reward))
      throw Error(ErrorCode::kNumeric, "evaluation produced a non-finite total in " + dir.string());
  }

  files.push_back("summary.json");
  const Json summary = {{"schema_version", kSchemaVersion},
                        {"kind", "run"},
                        {"mode", mode_name(mode)},
                        {"policy", to_string(spec.policy)},
                        {"seed", seed},
                        {"axis", to_string(spec.axis)},
                        {"axis_value", value},
                        {"fingerprint", fingerprint},
                        {"slots", scenario.config.horizon},
                        {"overall_dor", optional_json(out.overall_dor)},
                        {"eval_reward", optional_json(out.eval_reward)},
                        {"eval_violations", out.eval_violations},
                        {"final_reward_mean", optional_json(out.final_reward_mean)},
                        {"reward_window", spec.reward_window},
                        {"episodes", history ? Json(history->episodes.size()) : Json(0)},
                        {"checkpoint", checkpoint_ref},
                        {"files", files}};
  write_file_atomic(dir / "summary.json", dump(summary));
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

struct ExperimentPoint {
  std::vector<double> dor;
  std::vector<double> reward;
};

struct LoadedExperiment {
  std::string policy;
  std::string fingerprint;
  std::map<double, ExperimentPoint> points;
};

LoadedExperiment load_experiment(const std::filesystem::path& dir) {
  const Json j = read_json_file(dir / "experiment.json");
  LoadedExperiment e;
  try {
    e.policy = j.at("policy").get<std::string>();
    e.fingerprint = j.at("fingerprint").get<std::string>();
    for (const Json& p : j.at("points")) {
      ExperimentPoint& pt = e.points[p.at("axis_value").get<double>()];
      for (const Json& run : p.at("runs")) {
        if (run.at("overall_dor").is_null())
          throw Error(ErrorCode::kConfig, (dir / "experiment.json").string() +
                                              ": run has no evaluation (train-only?)");
        pt.dor.push_back(run.at("overall_dor").get<double>());
        if (!run.at("final_reward_mean").is_null())
          pt.reward.push_back(run.at("final_reward_mean").get<double>());
      }
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kConfig, (dir / "experiment.json").string() + ": " + ex.what());
  }
  return e;
}

double improvement_ratio(double candidate, double baseline) {
  if (baseline != 0.0) return candidate / baseline;
  if (candidate > 0.0) return std::numeric_limits<double>::infinity();
  if (candidate < 0.0) return -std::numeric_limits<double>::infinity();
  return 1.0;
}

}  // namespace

RolloutOptions policy_rollout_options(PolicyKind policy, const Maddpg* learner, const TrainConfig& train,
                                      std::uint64_t seed) {
  RolloutOptions o;
  o.penalty = train.penalty;
  o.extended_observation = train.extended_observation;
  o.rng_seed = seed;
  o.learner = learner;
  switch (policy) {
    case PolicyKind::kLearned:
      o.trajectory = TrajectorySource::kLearned;
      break;
    case PolicyKind::kAllOffload:
      o.trajectory = TrajectorySource::kLearned;
      o.offload = OffloadPolicy::kAllOffload;
      break;
    case PolicyKind::kRandomTrajectory:
      o.trajectory = TrajectorySource::kRandom;
      break;
    case PolicyKind::kAllLocal:
      o.trajectory = TrajectorySource::kHover;
      o.offload = OffloadPolicy::kAllLocal;
      break;
  }
  return o;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kNumUsers: return "num_users";
    case SweepAxis::kUavFreq: return "uav_freq";
    case SweepAxis::kUserFreq: return "user_freq";
  }
  return "none";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "none") return SweepAxis::kNone;
  if (name == "num_users") return SweepAxis::kNumUsers;
  if (name == "uav_freq") return SweepAxis::kUavFreq;
  if (name == "user_freq") return SweepAxis::kUserFreq;
  throw Error(ErrorCode::kConfig, "unknown sweep axis '" + name +
                                      "' (expected none, num_users, uav_freq or user_freq)");
}

void ExperimentSpec::validate() const {
  scenario.validate();
  channel.validate();
  train.validate();
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "seeds: at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw Error(ErrorCode::kConfig, "seeds: values must be distinct");
  if (reward_window < 1) throw Error(ErrorCode::kConfig, "reward_window must be >= 1");
  if (axis == SweepAxis::kNone) {
    if (!sweep_values.empty())
      throw Error(ErrorCode::kConfig, "sweep.values: must be empty when sweep.axis is none");
    return;
  }
  if (sweep_values.empty()) throw Error(ErrorCode::kConfig, "sweep.values: range is empty");
  if (std::set<double>(sweep_values.begin(), sweep_values.end()).size() != sweep_values.size())
    throw Error(ErrorCode::kConfig, "sweep.values: values must be distinct");
  for (double v : sweep_values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kConfig, "sweep.values: every value must be finite and > 0");
    if (axis == SweepAxis::kNumUsers && v != std::floor(v))
      throw Error(ErrorCode::kConfig, "sweep.values: num_users values must be integers");
  }
  for (double v : sweep_values) point_scenario(*this, v, seeds.front()).validate();
}

ExperimentSpec parse_spec(const Json& j) {
  ExperimentSpec spec;
  FieldReader r(j, "");
  int version = kSchemaVersion;
  r.integer("schema_version", version);
  if (version != kSchemaVersion)
    schema_error("schema_version", "unsupported version " + std::to_string(version));
  if (const Json* c = r.child("scenario")) read_scenario_config(*c, spec.scenario, "scenario");
  if (const Json* c = r.child("channel")) read_channel_params(*c, spec.channel, "channel");
  if (const Json* c = r.child("train")) read_train_config(*c, spec.train, "train");
  std::string policy = to_string(spec.policy);
  r.string("policy", policy);
  try {
    spec.policy = parse_policy_kind(policy);
  } catch (const Error& e) {
    schema_error("policy", e.what());
  }
  if (const Json* sweep = r.child("sweep")) {
    FieldReader sr(*sweep, "sweep");
    std::string axis = "none";
    sr.string("axis", axis);
    try {
      spec.axis = parse_sweep_axis(axis);
    } catch (const Error& e) {
      schema_error("sweep.axis", e.what());
    }
    if (const Json* values = sr.child("values")) {
      if (!values->is_array()) schema_error("sweep.values", "expected an array of numbers");
      for (const Json& v : *values) {
        if (!v.is_number()) schema_error("sweep.values", "expected an array of numbers");
        spec.sweep_values.push_back(v.get<double>());
      }
    }
    sr.finish();
  }
  if (const Json* seeds = r.child("seeds")) {
    if (!seeds->is_array()) schema_error("seeds", "expected an array of non-negative integers");
    spec.seeds.clear();
    for (const Json& s : *seeds) {
      if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0))
        schema_error("seeds", "expected an array of non-negative integers");
      spec.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  std::string out_dir = spec.output_dir.string();
  r.string("output_dir", out_dir);
  spec.output_dir = out_dir;
  if (r.has("checkpoint") && !j.at("checkpoint").is_null()) {
    std::string ckpt;
    r.string("checkpoint", ckpt);
    spec.checkpoint = ckpt;
  }
  r.integer("reward_window", spec.reward_window);
  r.finish();
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::kConfig, path.string() + ": no such file");
  try {
    return parse_spec(read_json_file(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConfig) throw;
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw Error(ErrorCode::kConfig, path.string() + ": " + what);
  }
}

Json to_json(const ExperimentSpec& spec) {
  Json j = {{"schema_version", kSchemaVersion},
            {"scenario", to_json(spec.scenario)},
            {"channel", to_json(spec.channel)},
            {"train", to_json(spec.train)},
            {"policy", to_string(spec.policy)},
            {"sweep", {{"axis", to_string(spec.axis)}, {"values", spec.sweep_values}}},
            {"seeds", spec.seeds},
            {"output_dir", spec.output_dir.generic_string()},
            {"reward_window", spec.reward_window}};
  j["checkpoint"] = spec.checkpoint ? Json(spec.checkpoint->generic_string()) : Json(nullptr);
  return j;
}

std::string scenario_fingerprint(const ExperimentSpec& spec) {
  ScenarioConfig scenario = spec.scenario;
  scenario.rng_seed = 0;  // replaced by each replicate seed
  const Json key = {{"scenario", to_json(scenario)},
                    {"channel", to_json(spec.channel)},
                    {"axis", to_string(spec.axis)},
                    {"values", spec.sweep_values},
                    {"seeds", spec.seeds}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(key.dump()));
  return buf;
}

ScenarioConfig point_scenario(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  ScenarioConfig c = spec.scenario;
  c.rng_seed = seed;
  switch (spec.axis) {
    case SweepAxis::kNone:
      break;
    case SweepAxis::kNumUsers:
      c.num_users = static_cast<int>(value);
      break;
    case SweepAxis::kUavFreq:
      c.uav_freq = value;
      break;
    case SweepAxis::kUserFreq:
      c.user_freq = {value, value};
      break;
  }
  return c;
}

RunArtifacts run(const ExperimentSpec& spec, RunMode mode) {
  spec.validate();
  RunArtifacts artifacts;
  artifacts.root = spec.output_dir;
  artifacts.fingerprint = scenario_fingerprint(spec);

  const std::vector<double> values =
      spec.axis == SweepAxis::kNone ? std::vector<double>{0.0} : spec.sweep_values;
  Csv sweep({"axis", "axis_value", "seed", "policy", "overall_dor", "eval_reward",
             "eval_violations", "final_reward_mean", "directory"});
  Json points = Json::array();
  for (double value : values) {
    Json runs = Json::array();
    std::vector<double> dors, rewards;
    for (std::uint64_t seed : spec.seeds) {
      std::filesystem::path rel = point_label(spec.axis, value);
      rel /= "seed_" + std::to_string(seed);
      const PointResult p = run_point(spec, mode, value, seed, rel, artifacts.fingerprint);
      sweep.row(to_string(spec.axis), value, seed, to_string(spec.policy), optional_cell(p.overall_dor),
                optional_cell(p.eval_reward), p.eval_violations, optional_cell(p.final_reward_mean),
                rel.generic_string());
      runs.push_back({{"seed", seed},
                      {"directory", rel.generic_string()},
                      {"overall_dor", optional_json(p.overall_dor)},
                      {"eval_reward", optional_json(p.eval_reward)},
                      {"final_reward_mean", optional_json(p.final_reward_mean)}});
      if (p.overall_dor) dors.push_back(*p.overall_dor);
      if (p.final_reward_mean) rewards.push_back(*p.final_reward_mean);
      artifacts.points.push_back(p);
    }
    points.push_back({{"axis_value", value},
                      {"mean_overall_dor", dors.empty() ? Json(nullptr) : Json(mean_of(dors))},
                      {"mean_final_reward", rewards.empty() ? Json(nullptr) : Json(mean_of(rewards))},
                      {"runs", runs}});
  }
  Json spec_json = to_json(spec);
  spec_json.erase("output_dir");
  const Json experiment = {{"schema_version", kSchemaVersion},
                           {"kind", "experiment"},
                           {"mode", mode_name(mode)},
                           {"policy", to_string(spec.policy)},
                           {"fingerprint", artifacts.fingerprint},
                           {"axis", to_string(spec.axis)},
                           {"spec", spec_json},
                           {"points", points}};
  write_file_atomic(spec.output_dir / "sweep.csv", sweep.text());
  write_file_atomic(spec.output_dir / "experiment.json", dump(experiment));
  return artifacts;
}

ComparisonTable compare(const std::vector<std::filesystem::path>& runs,
                        const std::optional<std::filesystem::path>& out_dir) {
  if (runs.size() < 2) throw Error(ErrorCode::kConfig, "compare needs at least two run directories");
  std::vector<LoadedExperiment> loaded;
  for (const auto& dir : runs) loaded.push_back(load_experiment(dir));
  for (std::size_t i = 1; i < loaded.size(); ++i) {
    if (loaded[i].fingerprint != loaded[0].fingerprint)
      throw Error(ErrorCode::kRefused, "scenario mismatch: " + runs[0].string() + " has fingerprint " +
                                           loaded[0].fingerprint + ", " + runs[i].string() + " has " +
                                           loaded[i].fingerprint);
  }

  ComparisonTable table;
  table.candidate = loaded[0].policy;
  table.fingerprint = loaded[0].fingerprint;
  for (std::size_t i = 1; i < loaded.size(); ++i) {
    for (const auto& [value, cand] : loaded[0].points) {
      const ExperimentPoint& base = loaded[i].points.at(value);
      ComparisonRow row;
      row.baseline = loaded[i].policy;
      row.axis_value = value;
      row.candidate_mean = mean_of(cand.dor);
      row.baseline_mean = mean_of(base.dor);
      row.ratio = improvement_ratio(row.candidate_mean, row.baseline_mean);
      row.win = row.candidate_mean > row.baseline_mean;
      if (!cand.reward.empty()) row.candidate_reward = mean_of(cand.reward);
      if (!base.reward.empty()) row.baseline_reward = mean_of(base.reward);
      table.rows.push_back(row);
    }
  }

  if (out_dir) {
    Csv csv({"candidate", "baseline", "axis_value", "candidate_dor", "baseline_dor", "ratio", "win",
             "candidate_final_reward", "baseline_final_reward"});
    for (const ComparisonRow& r : table.rows)
      csv.row(table.candidate, r.baseline, r.axis_value, r.candidate_mean, r.baseline_mean, r.ratio,
              std::string(r.win ? "1" : "0"), optional_cell(r.candidate_reward),
              optional_cell(r.baseline_reward));
    write_file_atomic(*out_dir / "comparison.csv", csv.text());
    write_file_atomic(*out_dir / "comparison.json", dump(to_json(table)));
  }
  return table;
}

Json to_json(const ComparisonTable& table) {
  Json rows = Json::array();
  for (const ComparisonRow& r : table.rows) {
    Json ratio = std::isfinite(r.ratio) ? Json(r.ratio) : Json(r.ratio > 0 ? "inf" : "-inf");
    rows.push_back({{"baseline", r.baseline},
                    {"axis_value", r.axis_value},
                    {"candidate_dor", r.candidate_mean},
                    {"baseline_dor", r.baseline_mean},
                    {"ratio", ratio},
                    {"win", r.win},
                    {"candidate_final_reward", optional_json(r.candidate_reward)},
                    {"baseline_final_reward", optional_json(r.baseline_reward)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "comparison"},
          {"candidate", table.candidate},
          {"fingerprint", table.fingerprint},
          {"rows", rows}};
}

SlotContext random_slot_context(std::mt19937_64& rng, int num_users, int num_uavs,
                                const ChannelParams& channel) {
  const ScenarioConfig defaults;
  std::uniform_real_distribution<double> ux(0.0, defaults.area_x), uy(0.0, defaults.area_y);
  std::uniform_real_distribution<double> uz(defaults.z_min, defaults.z_max);
  std::uniform_real_distribution<double> uangle(30.0, 90.0);
  auto pick = [&](const Range& r) { return std::uniform_real_distribution<double>(r.low, r.high)(rng); };

  std::vector<UserState> users(num_users);
  std::vector<Task> tasks(num_users);
  for (int m = 0; m < num_users; ++m) {
    users[m].position = {ux(rng), uy(rng), 0.0};
    users[m].cpu_freq = pick(defaults.user_freq);
    users[m].tx_power = pick(defaults.user_power);
    tasks[m].bits = pick(defaults.task_bits);
    tasks[m].cycles_per_bit = pick(defaults.task_cycles_per_bit);
  }
  std::vector<UavState> uavs(num_uavs);
  for (int n = 0; n < num_uavs; ++n) {
    uavs[n].position = {ux(rng), uy(rng), uz(rng)};
    uavs[n].cpu_freq = defaults.uav_freq;
    uavs[n].tx_power = defaults.uav_power;
    uavs[n].half_angle_deg = uangle(rng);
  }
  return make_slot_context(std::move(users), std::move(uavs), std::move(tasks), channel);
}

OracleCheckReport kkt_oracle_check(std::uint64_t seed, int instances, double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> users(1, 10), uavs(1, 4);
  OracleCheckReport report;
  report.instances = instances;
  for (int k = 0; k < instances; ++k) {
    const SlotContext ctx = random_slot_context(rng, users(rng), uavs(rng));
    std::vector<int> assignment(ctx.num_users(), kLocal);
    std::uniform_int_distribution<int> coin(0, 3);
    bool any = false;
    for (int m = 0; m < ctx.num_users(); ++m) {
      if (ctx.ingress[m] == kLocal || coin(rng) == 0) continue;
      assignment[m] = std::uniform_int_distribution<int>(0, ctx.num_uavs() - 1)(rng);
      any = true;
    }
    if (!any) {
      // Force at least one offloaded user so every instance exercises the closed forms.
      for (int m = 0; m < ctx.num_users() && !any; ++m)
        if (ctx.ingress[m] != kLocal) assignment[m] = ctx.ingress[m], any = true;
      if (!any) {
        --k;
        continue;
      }
    }
    const Evaluation closed = evaluate_assignment(assignment, ctx);
    const ConvexOracleResult oracle = numeric_convex_oracle(assignment, ctx);
    const double closed_obj =
        allocation_objective(assignment, ctx, closed.decision.bandwidth_hz, closed.decision.cpu_hz);
    const double gap = std::abs(closed_obj - oracle.objective) / std::abs(oracle.objective);
    report.max_relative_gap = std::max(report.max_relative_gap, gap);

    for (int n = 0; n < ctx.num_uavs(); ++n) {
      double bw = 0.0, cpu = 0.0;
      bool has_bw = false, has_cpu = false;
      for (int m = 0; m < ctx.num_users(); ++m) {
        if (assignment[m] == kLocal) continue;
        if (ctx.ingress[m] == n) bw += closed.decision.bandwidth_hz[m], has_bw = true;
        if (assignment[m] == n) cpu += closed.decision.cpu_hz[m], has_cpu = true;
      }
      double err = 0.0;
      if (has_bw) err = std::max(err, std::abs(bw - ctx.channel.bw_g2a_hz) / ctx.channel.bw_g2a_hz);
      if (has_cpu) err = std::max(err, std::abs(cpu - ctx.uavs[n].cpu_freq) / ctx.uavs[n].cpu_freq);
      report.max_share_sum_error = std::max(report.max_share_sum_error, err);
      if (err > 1e-12) ++report.failures;
    }
    if (!(gap <= tolerance)) ++report.failures;
  }
  return report;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace uavmec
