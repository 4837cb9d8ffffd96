#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uavmec/baselines.hpp"
#include "uavmec/maddpg.hpp"
#include "uavmec/model.hpp"
#include "uavmec/serialize.hpp"
#include "uavmec/trainer.hpp"

namespace uavmec {

enum class SweepAxis { kNone, kNumUsers, kUavFreq, kUserFreq };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct ExperimentSpec {
  ScenarioConfig scenario;
  ChannelParams channel;
  TrainConfig train;
  PolicyKind policy = PolicyKind::kLearned;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> sweep_values;  // Hz for the frequency axes
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "runs";
  // Trained actors to reuse instead of training (learned and all-offload).
  std::optional<std::filesystem::path> checkpoint;
  int reward_window = 20;

  void validate() const;
};

ExperimentSpec parse_spec(const Json& j);
ExperimentSpec load_spec(const std::filesystem::path& path);
Json to_json(const ExperimentSpec& spec);

/// Hash of everything that defines the world: scenario, channel, sweep and
/// seeds. Runs are comparable only when their fingerprints agree.
std::string scenario_fingerprint(const ExperimentSpec& spec);

/// Scenario and trainer configuration for one sweep point and seed.
ScenarioConfig point_scenario(const ExperimentSpec& spec, double axis_value, std::uint64_t seed);

enum class RunMode {
  kRun,    // train when needed, then evaluate
  kTrain,  // train only
  kEval,   // evaluate only; learned policies need a checkpoint
};

struct PointResult {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path directory;
  std::optional<double> overall_dor;         // evaluation rollout
  std::optional<double> eval_reward;
  std::optional<double> final_reward_mean;   // training or RT history
  int eval_violations = 0;
};

struct RunArtifacts {
  std::filesystem::path root;
  std::string fingerprint;
  std::vector<PointResult> points;
};

/// Executes every (sweep point, seed) pair in order and writes per-point
/// CSV/JSON files plus sweep.csv and experiment.json under output_dir.
RunArtifacts run(const ExperimentSpec& spec, RunMode mode = RunMode::kRun);

/// Trajectory and offloading settings that realize `policy` in a rollout.
/// Learned and all-offload need `learner`.
RolloutOptions policy_rollout_options(PolicyKind policy, const Maddpg* learner,
                                      const TrainConfig& train, std::uint64_t seed);

struct ComparisonRow {
  std::string baseline;
  double axis_value = 0.0;
  double candidate_mean = 0.0;
  double baseline_mean = 0.0;
  double ratio = 1.0;  // +inf when the baseline mean is zero and the candidate's is positive
  bool win = false;
  std::optional<double> candidate_reward;
  std::optional<double> baseline_reward;
};

struct ComparisonTable {
  std::string candidate;
  std::string fingerprint;
  std::vector<ComparisonRow> rows;
};

/// The first directory is the candidate; every other one is a baseline.
/// Throws Error(kRefused) when the fingerprints differ.
ComparisonTable compare(const std::vector<std::filesystem::path>& runs,
                        const std::optional<std::filesystem::path>& out_dir);
Json to_json(const ComparisonTable& table);

struct OracleCheckReport {
  int instances = 0;
  double max_relative_gap = 0.0;
  double max_share_sum_error = 0.0;
  int failures = 0;
};

/// Random bandwidth/CPU subproblems: closed forms against the numeric oracle.
OracleCheckReport kkt_oracle_check(std::uint64_t seed, int instances, double tolerance = 1e-6);

/// Random geometry and tasks drawn from the default scenario ranges, with
/// coverage half-angles in [30, 90] degrees so some users may be uncovered.
SlotContext random_slot_context(std::mt19937_64& rng, int num_users, int num_uavs,
                                const ChannelParams& channel = {});

/// printf("%.17g") for every number the harness writes.
std::string format_number(double v);

}  // namespace uavmec
