#include "uavmec/uavmec.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "uavmec/allocator.hpp"
#include "uavmec/error.hpp"
#include "uavmec/harness.hpp"
#include "uavmec/serialize.hpp"

struct uavmec_experiment {
  uavmec::ExperimentSpec spec;
};

struct uavmec_scenario {
  uavmec::Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

uavmec_status to_status(uavmec::ErrorCode code) {
  using uavmec::ErrorCode;
  switch (code) {
    case ErrorCode::kConfig: return UAVMEC_ERR_CONFIG;
    case ErrorCode::kDomain: return UAVMEC_ERR_DOMAIN;
    case ErrorCode::kInfeasible: return UAVMEC_ERR_INFEASIBLE;
    case ErrorCode::kInvalidDecision: return UAVMEC_ERR_INVALID_DECISION;
    case ErrorCode::kNumeric: return UAVMEC_ERR_NUMERIC;
    case ErrorCode::kRefused: return UAVMEC_ERR_REFUSED;
    case ErrorCode::kShape: return UAVMEC_ERR_SHAPE;
    case ErrorCode::kIo: return UAVMEC_ERR_IO;
  }
  return UAVMEC_ERR_INTERNAL;
}

uavmec_status fail(uavmec_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
uavmec_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return UAVMEC_OK;
  } catch (const uavmec::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(UAVMEC_ERR_CONFIG, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(UAVMEC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(UAVMEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UAVMEC_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const uavmec::Json& j) {
  if (out) *out = copy_string(j.dump(2));
}

uavmec::Json parse_text(const char* text) {
  if (text == nullptr || *text == '\0') return uavmec::Json::object();
  try {
    return uavmec::Json::parse(text);
  } catch (const uavmec::Json::parse_error& e) {
    throw uavmec::Error(uavmec::ErrorCode::kConfig, e.what());
  }
}

#define UAVMEC_REQUIRE(ptr)                                                         \
  do {                                                                              \
    if ((ptr) == nullptr) return fail(UAVMEC_ERR_NULL_ARGUMENT, #ptr " is null");   \
  } while (0)

// Applies `edit` to a copy and keeps it only if the result validates.
template <typename F>
uavmec_status edit_spec(uavmec_experiment* exp, F&& edit) {
  UAVMEC_REQUIRE(exp);
  return guarded([&] {
    uavmec::ExperimentSpec next = exp->spec;
    edit(next);
    next.validate();
    exp->spec = std::move(next);
  });
}

}  // namespace

extern "C" {

UAVMEC_API const char* uavmec_version(void) { return "0.1.0"; }

UAVMEC_API const char* uavmec_last_error(void) { return g_last_error.c_str(); }

UAVMEC_API const char* uavmec_status_name(uavmec_status status) {
  switch (status) {
    case UAVMEC_OK: return "ok";
    case UAVMEC_ERR_CONFIG: return "config";
    case UAVMEC_ERR_DOMAIN: return "domain";
    case UAVMEC_ERR_INFEASIBLE: return "infeasible";
    case UAVMEC_ERR_INVALID_DECISION: return "invalid_decision";
    case UAVMEC_ERR_NUMERIC: return "numeric";
    case UAVMEC_ERR_REFUSED: return "refused";
    case UAVMEC_ERR_SHAPE: return "shape";
    case UAVMEC_ERR_IO: return "io";
    case UAVMEC_ERR_NULL_ARGUMENT: return "null_argument";
    case UAVMEC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

UAVMEC_API void uavmec_string_free(char* s) { std::free(s); }

UAVMEC_API uavmec_status uavmec_experiment_create(const char* spec_json, uavmec_experiment** out) {
  UAVMEC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new uavmec_experiment{uavmec::parse_spec(parse_text(spec_json))}; });
}

UAVMEC_API uavmec_status uavmec_experiment_load(const char* path, uavmec_experiment** out) {
  UAVMEC_REQUIRE(path);
  UAVMEC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new uavmec_experiment{uavmec::load_spec(path)}; });
}

UAVMEC_API void uavmec_experiment_free(uavmec_experiment* exp) { delete exp; }

UAVMEC_API uavmec_status uavmec_experiment_set_seeds(uavmec_experiment* exp, const uint64_t* seeds,
                                                     size_t count) {
  UAVMEC_REQUIRE(seeds);
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) { s.seeds.assign(seeds, seeds + count); });
}

UAVMEC_API uavmec_status uavmec_experiment_set_output_dir(uavmec_experiment* exp, const char* dir) {
  UAVMEC_REQUIRE(dir);
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) { s.output_dir = dir; });
}

UAVMEC_API uavmec_status uavmec_experiment_set_policy(uavmec_experiment* exp, const char* policy) {
  UAVMEC_REQUIRE(policy);
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) { s.policy = uavmec::parse_policy_kind(policy); });
}

UAVMEC_API uavmec_status uavmec_experiment_set_checkpoint(uavmec_experiment* exp, const char* path) {
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) {
    if (path == nullptr || *path == '\0') s.checkpoint.reset();
    else s.checkpoint = path;
  });
}

UAVMEC_API uavmec_status uavmec_experiment_set_episodes(uavmec_experiment* exp, int episodes) {
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) { s.train.episodes = episodes; });
}

UAVMEC_API uavmec_status uavmec_experiment_set_sweep(uavmec_experiment* exp, const char* axis,
                                                     const double* values, size_t count) {
  UAVMEC_REQUIRE(axis);
  if (count > 0) UAVMEC_REQUIRE(values);
  return edit_spec(exp, [&](uavmec::ExperimentSpec& s) {
    s.axis = uavmec::parse_sweep_axis(axis);
    s.sweep_values.assign(values, values + count);
  });
}

UAVMEC_API uavmec_status uavmec_experiment_spec(const uavmec_experiment* exp, char** out_json) {
  UAVMEC_REQUIRE(exp);
  UAVMEC_REQUIRE(out_json);
  return guarded([&] { emit(out_json, uavmec::to_json(exp->spec)); });
}

UAVMEC_API uavmec_status uavmec_experiment_run(const uavmec_experiment* exp, uavmec_run_mode mode,
                                               char** out_json) {
  UAVMEC_REQUIRE(exp);
  uavmec::RunMode m;
  switch (mode) {
    case UAVMEC_MODE_RUN: m = uavmec::RunMode::kRun; break;
    case UAVMEC_MODE_TRAIN: m = uavmec::RunMode::kTrain; break;
    case UAVMEC_MODE_EVAL: m = uavmec::RunMode::kEval; break;
    default: return fail(UAVMEC_ERR_CONFIG, "unknown run mode");
  }
  return guarded([&] {
    const uavmec::RunArtifacts artifacts = uavmec::run(exp->spec, m);
    if (out_json) emit(out_json, uavmec::read_json_file(artifacts.root / "experiment.json"));
  });
}

UAVMEC_API uavmec_status uavmec_compare(const char* const* run_dirs, size_t count, const char* out_dir,
                                        char** out_json) {
  UAVMEC_REQUIRE(run_dirs);
  return guarded([&] {
    std::vector<std::filesystem::path> dirs;
    for (size_t i = 0; i < count; ++i) {
      if (run_dirs[i] == nullptr) throw uavmec::Error(uavmec::ErrorCode::kConfig, "null run directory");
      dirs.emplace_back(run_dirs[i]);
    }
    std::optional<std::filesystem::path> out;
    if (out_dir) out = out_dir;
    const uavmec::ComparisonTable table = uavmec::compare(dirs, out);
    emit(out_json, uavmec::to_json(table));
  });
}

UAVMEC_API uavmec_status uavmec_scenario_create(const char* config_json, uint64_t seed,
                                                uavmec_scenario** out) {
  UAVMEC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const uavmec::Json j = parse_text(config_json);
    uavmec::ScenarioConfig config;
    uavmec::ChannelParams channel;
    if (!j.is_object()) throw uavmec::Error(uavmec::ErrorCode::kConfig, "expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "scenario" && it.key() != "channel")
        throw uavmec::Error(uavmec::ErrorCode::kConfig, it.key() + ": unknown key");
    if (j.contains("scenario")) uavmec::read_scenario_config(j.at("scenario"), config);
    if (j.contains("channel")) uavmec::read_channel_params(j.at("channel"), channel);
    config.rng_seed = seed;
    *out = new uavmec_scenario{uavmec::build_scenario(config, channel)};
  });
}

UAVMEC_API uavmec_status uavmec_scenario_from_snapshot(const char* snapshot_json,
                                                       uavmec_scenario** out) {
  UAVMEC_REQUIRE(snapshot_json);
  UAVMEC_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new uavmec_scenario{uavmec::scenario_from_snapshot(parse_text(snapshot_json))};
  });
}

UAVMEC_API void uavmec_scenario_free(uavmec_scenario* scenario) { delete scenario; }

UAVMEC_API uavmec_status uavmec_scenario_snapshot(const uavmec_scenario* scenario, char** out_json) {
  UAVMEC_REQUIRE(scenario);
  UAVMEC_REQUIRE(out_json);
  return guarded([&] { emit(out_json, uavmec::scenario_snapshot(scenario->scenario)); });
}

UAVMEC_API uavmec_status uavmec_scenario_slot_context(const uavmec_scenario* scenario, int slot,
                                                      uint64_t stream, char** out_json) {
  UAVMEC_REQUIRE(scenario);
  UAVMEC_REQUIRE(out_json);
  return guarded([&] {
    const uavmec::Scenario& s = scenario->scenario;
    const auto tasks = uavmec::generate_tasks(s, slot, stream);
    emit(out_json, uavmec::slot_context_json(uavmec::make_slot_context(s.users, s.uavs, tasks, s.channel)));
  });
}

UAVMEC_API uavmec_status uavmec_allocate(const char* context_json, int with_oracle, char** out_json) {
  UAVMEC_REQUIRE(context_json);
  UAVMEC_REQUIRE(out_json);
  return guarded([&] {
    const uavmec::SlotContext ctx = uavmec::slot_context_from_json(parse_text(context_json));
    const uavmec::AllocationResult cd = uavmec::cd_search(ctx);
    uavmec::Json j = uavmec::allocation_json(cd);
    if (with_oracle) {
      const uavmec::AllocationResult best = uavmec::brute_force_oracle(ctx);
      uavmec::Json o = uavmec::allocation_json(best);
      o.erase("schema_version");
      o.erase("kind");
      o.erase("iterations");
      o.erase("converged");
      j["oracle"] = o;
      j["oracle_gap"] = best.dor - cd.dor;
    }
    emit(out_json, j);
  });
}

UAVMEC_API uavmec_status uavmec_oracle_check(uint64_t seed, int instances, char** out_json) {
  UAVMEC_REQUIRE(out_json);
  if (instances < 1) return fail(UAVMEC_ERR_CONFIG, "instances must be >= 1");
  return guarded([&] {
    const uavmec::OracleCheckReport r = uavmec::kkt_oracle_check(seed, instances);
    emit(out_json, {{"schema_version", uavmec::kSchemaVersion},
                    {"kind", "oracle_check"},
                    {"seed", seed},
                    {"instances", r.instances},
                    {"max_relative_objective_gap", r.max_relative_gap},
                    {"max_share_sum_error", r.max_share_sum_error},
                    {"failures", r.failures},
                    {"passed", r.failures == 0}});
  });
}

}  // extern "C"
