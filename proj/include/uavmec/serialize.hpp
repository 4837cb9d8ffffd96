#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "uavmec/allocator.hpp"
#include "uavmec/maddpg.hpp"
#include "uavmec/model.hpp"
#include "uavmec/trainer.hpp"

namespace uavmec {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Strict readers: every key is optional (defaults come from the target
// object) but unknown keys and wrong types throw Error(kConfig) with the
// dotted field path.
void read_scenario_config(const Json& j, ScenarioConfig& out, const std::string& path = "scenario");
void read_channel_params(const Json& j, ChannelParams& out, const std::string& path = "channel");
void read_train_config(const Json& j, TrainConfig& out, const std::string& path = "train");

Json to_json(const ScenarioConfig& c);
Json to_json(const ChannelParams& c);
Json to_json(const TrainConfig& c);

/// World snapshot: config, channel and the concrete user/UAV states.
Json scenario_snapshot(const Scenario& s);
Scenario scenario_from_snapshot(const Json& j);

/// Slot context for the standalone allocator: users, UAVs, tasks, channel.
Json slot_context_json(const SlotContext& ctx);
/// Accepts a slot-context document or a scenario snapshot with a `slot`
/// (and optional `stream`) field, in which case tasks are generated.
SlotContext slot_context_from_json(const Json& j);

Json allocation_json(const AllocationResult& r);

Json checkpoint_json(const TrainResult& r);
Json learner_json(const Maddpg& learner);
Maddpg learner_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace uavmec
