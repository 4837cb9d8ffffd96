#include "uavmec/serialize.hpp"

#include <fstream>
#include <sstream>

#include "field_reader.hpp"
#include "uavmec/error.hpp"

namespace uavmec {
namespace {

using detail::FieldReader;
using detail::schema_error;

Vec3 read_vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) schema_error(path, "expected [x, y, z]");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) schema_error(path, "expected [x, y, z]");
    v(i) = j[i].get<double>();
  }
  return v;
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(path, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::vector<UserState> read_users(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  std::vector<UserState> users;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    FieldReader r(j[i], p);
    UserState u;
    if (const Json* pos = r.child("position")) u.position = read_vec3(*pos, r.at("position"));
    r.number("cpu_freq", u.cpu_freq);
    r.number("tx_power", u.tx_power);
    r.finish();
    if (!(u.cpu_freq > 0.0) || !(u.tx_power > 0.0)) schema_error(p, "cpu_freq and tx_power must be > 0");
    users.push_back(u);
  }
  return users;
}

std::vector<UavState> read_uavs(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  std::vector<UavState> uavs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    FieldReader r(j[i], p);
    UavState u;
    if (const Json* pos = r.child("position")) u.position = read_vec3(*pos, r.at("position"));
    r.number("cpu_freq", u.cpu_freq);
    r.number("tx_power", u.tx_power);
    r.number("half_angle_deg", u.half_angle_deg);
    r.finish();
    if (!(u.cpu_freq > 0.0) || !(u.tx_power > 0.0)) schema_error(p, "cpu_freq and tx_power must be > 0");
    if (!(u.half_angle_deg >= 0.0 && u.half_angle_deg <= 90.0))
      schema_error(p, "half_angle_deg must lie in [0, 90]");
    uavs.push_back(u);
  }
  return uavs;
}

Json users_json(const std::vector<UserState>& users) {
  Json a = Json::array();
  for (const UserState& u : users)
    a.push_back({{"position", vec3_json(u.position)}, {"cpu_freq", u.cpu_freq}, {"tx_power", u.tx_power}});
  return a;
}

Json uavs_json(const std::vector<UavState>& uavs) {
  Json a = Json::array();
  for (const UavState& u : uavs)
    a.push_back({{"position", vec3_json(u.position)},
                 {"cpu_freq", u.cpu_freq},
                 {"tx_power", u.tx_power},
                 {"half_angle_deg", u.half_angle_deg}});
  return a;
}

void check_schema_version(FieldReader& r, const std::string& path) {
  int version = kSchemaVersion;
  r.integer("schema_version", version);
  if (version != kSchemaVersion)
    schema_error(path.empty() ? "schema_version" : path + ".schema_version",
                 "unsupported version " + std::to_string(version));
}

Json choice_json(int c) { return c == kLocal ? Json("local") : Json(c); }

Json mlp_json(const Mlp& net) {
  Json layers = Json::array();
  for (const DenseLayer& l : net.layers()) {
    Json w = Json::array();
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      for (Eigen::Index k = 0; k < l.weight.cols(); ++k) w.push_back(l.weight(i, k));
    layers.push_back({{"rows", l.weight.rows()}, {"cols", l.weight.cols()}, {"weight", w},
                      {"bias", vector_json(l.bias)}});
  }
  return {{"activation", net.activation() == OutputActivation::kTanh ? "tanh" : "linear"},
          {"layers", layers}};
}

void mlp_from_json(const Json& j, Mlp& net, const std::string& path) {
  const Json& layers = j.at("layers");
  if (!layers.is_array() || layers.size() != Mlp::kLayers) schema_error(path, "expected 3 layers");
  for (int k = 0; k < Mlp::kLayers; ++k) {
    DenseLayer& l = net.layers()[k];
    const Json& lj = layers[k];
    const auto rows = lj.at("rows").get<Eigen::Index>();
    const auto cols = lj.at("cols").get<Eigen::Index>();
    if (rows != l.weight.rows() || cols != l.weight.cols())
      schema_error(path, "layer " + std::to_string(k) + " shape mismatch");
    const Json& w = lj.at("weight");
    if (w.size() != static_cast<std::size_t>(rows * cols)) schema_error(path, "weight size mismatch");
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index c = 0; c < cols; ++c) l.weight(i, c) = w[i * cols + c].get<double>();
    l.bias = vector_from(lj.at("bias"), path + ".bias");
    if (l.bias.size() != rows) schema_error(path, "bias size mismatch");
  }
}

}  // namespace

void read_scenario_config(const Json& j, ScenarioConfig& c, const std::string& path) {
  FieldReader r(j, path);
  r.number("area_x", c.area_x);
  r.number("area_y", c.area_y);
  r.number("z_min", c.z_min);
  r.number("z_max", c.z_max);
  r.number("d_min", c.d_min);
  r.number("v_max", c.v_max);
  r.number("slot_seconds", c.slot_seconds);
  r.integer("num_users", c.num_users);
  r.integer("num_uavs", c.num_uavs);
  r.integer("horizon", c.horizon);
  r.range("task_bits_range", c.task_bits);
  r.range("task_cycles_per_bit_range", c.task_cycles_per_bit);
  r.range("user_freq_range", c.user_freq);
  r.range("user_power_range", c.user_power);
  r.number("uav_freq", c.uav_freq);
  r.number("uav_power", c.uav_power);
  r.number("coverage_half_angle_deg", c.coverage_half_angle_deg);
  r.integer("rng_seed", c.rng_seed);
  std::string mobility = c.user_mobility == UserMobility::kStatic ? "static" : "random_waypoint";
  r.string("user_mobility", mobility);
  if (mobility == "static") c.user_mobility = UserMobility::kStatic;
  else if (mobility == "random_waypoint") c.user_mobility = UserMobility::kRandomWaypoint;
  else schema_error(r.at("user_mobility"), "expected \"static\" or \"random_waypoint\"");
  r.number("user_speed", c.user_speed);
  if (const Json* starts = r.child("uav_starts")) {
    if (!starts->is_array()) schema_error(r.at("uav_starts"), "expected an array of [x, y, z]");
    c.uav_starts.clear();
    for (std::size_t i = 0; i < starts->size(); ++i)
      c.uav_starts.push_back(read_vec3((*starts)[i], r.at("uav_starts") + "[" + std::to_string(i) + "]"));
  }
  r.finish();
}

void read_channel_params(const Json& j, ChannelParams& c, const std::string& path) {
  FieldReader r(j, path);
  r.number("a", c.a);
  r.number("b", c.b);
  r.number("eta_los_db", c.eta_los_db);
  r.number("eta_nlos_db", c.eta_nlos_db);
  r.number("carrier_mhz", c.carrier_mhz);
  r.number("noise_g2a_watts", c.noise_g2a_watts);
  r.number("noise_a2a_watts", c.noise_a2a_watts);
  r.number("bw_g2a_hz", c.bw_g2a_hz);
  r.number("bw_a2a_hz", c.bw_a2a_hz);
  std::string mode = c.elevation == ElevationMode::kHorizontal ? "horizontal" : "slant";
  r.string("elevation", mode);
  if (mode == "horizontal") c.elevation = ElevationMode::kHorizontal;
  else if (mode == "slant") c.elevation = ElevationMode::kSlant;
  else schema_error(r.at("elevation"), "expected \"horizontal\" or \"slant\"");
  r.finish();
}

void read_train_config(const Json& j, TrainConfig& c, const std::string& path) {
  FieldReader r(j, path);
  r.number("lr_actor", c.lr_actor);
  r.number("lr_critic", c.lr_critic);
  r.number("tau", c.tau);
  r.number("gamma", c.gamma);
  r.integer("buffer_capacity", c.buffer_capacity);
  r.integer("episodes", c.episodes);
  r.integer("batch_size", c.batch_size);
  r.integer("min_fill", c.min_fill);
  r.number("noise_start", c.noise_start);
  r.number("noise_end", c.noise_end);
  r.number("noise_decay_fraction", c.noise_decay_fraction);
  r.number("penalty", c.penalty);
  r.integer("actor_hidden", c.actor_hidden);
  r.integer("critic_hidden", c.critic_hidden);
  r.boolean("extended_observation", c.extended_observation);
  r.integer("seed", c.seed);
  r.finish();
}

Json to_json(const ScenarioConfig& c) {
  Json starts = Json::array();
  for (const Vec3& p : c.uav_starts) starts.push_back(vec3_json(p));
  return {{"area_x", c.area_x},
          {"area_y", c.area_y},
          {"z_min", c.z_min},
          {"z_max", c.z_max},
          {"d_min", c.d_min},
          {"v_max", c.v_max},
          {"slot_seconds", c.slot_seconds},
          {"num_users", c.num_users},
          {"num_uavs", c.num_uavs},
          {"horizon", c.horizon},
          {"task_bits_range", {c.task_bits.low, c.task_bits.high}},
          {"task_cycles_per_bit_range", {c.task_cycles_per_bit.low, c.task_cycles_per_bit.high}},
          {"user_freq_range", {c.user_freq.low, c.user_freq.high}},
          {"user_power_range", {c.user_power.low, c.user_power.high}},
          {"uav_freq", c.uav_freq},
          {"uav_power", c.uav_power},
          {"coverage_half_angle_deg", c.coverage_half_angle_deg},
          {"rng_seed", c.rng_seed},
          {"user_mobility", c.user_mobility == UserMobility::kStatic ? "static" : "random_waypoint"},
          {"user_speed", c.user_speed},
          {"uav_starts", starts}};
}

Json to_json(const ChannelParams& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"eta_los_db", c.eta_los_db},
          {"eta_nlos_db", c.eta_nlos_db},
          {"carrier_mhz", c.carrier_mhz},
          {"noise_g2a_watts", c.noise_g2a_watts},
          {"noise_a2a_watts", c.noise_a2a_watts},
          {"bw_g2a_hz", c.bw_g2a_hz},
          {"bw_a2a_hz", c.bw_a2a_hz},
          {"elevation", c.elevation == ElevationMode::kHorizontal ? "horizontal" : "slant"}};
}

Json to_json(const TrainConfig& c) {
  return {{"lr_actor", c.lr_actor},
          {"lr_critic", c.lr_critic},
          {"tau", c.tau},
          {"gamma", c.gamma},
          {"buffer_capacity", c.buffer_capacity},
          {"episodes", c.episodes},
          {"batch_size", c.batch_size},
          {"min_fill", c.min_fill},
          {"noise_start", c.noise_start},
          {"noise_end", c.noise_end},
          {"noise_decay_fraction", c.noise_decay_fraction},
          {"penalty", c.penalty},
          {"actor_hidden", c.actor_hidden},
          {"critic_hidden", c.critic_hidden},
          {"extended_observation", c.extended_observation},
          {"seed", c.seed}};
}

Json scenario_snapshot(const Scenario& s) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "scenario"},
          {"seed", s.config.rng_seed},
          {"config", to_json(s.config)},
          {"channel", to_json(s.channel)},
          {"users", users_json(s.users)},
          {"uavs", uavs_json(s.uavs)}};
}

Scenario scenario_from_snapshot(const Json& j) {
  FieldReader r(j, "");
  check_schema_version(r, "");
  std::string kind = "scenario";
  r.string("kind", kind);
  if (kind != "scenario") schema_error("kind", "expected \"scenario\"");
  Scenario s;
  std::uint64_t seed = s.config.rng_seed;
  r.integer("seed", seed);
  if (const Json* c = r.child("config")) read_scenario_config(*c, s.config, "config");
  s.config.rng_seed = seed;
  if (const Json* c = r.child("channel")) read_channel_params(*c, s.channel, "channel");
  s.config.validate();
  s.channel.validate();
  // Start from the generated world, then take whatever states the file pins.
  Scenario generated = build_scenario(s.config, s.channel);
  s.users = generated.users;
  s.uavs = generated.uavs;
  s.user_waypoints = generated.user_waypoints;
  if (const Json* u = r.child("users")) s.users = read_users(*u, "users");
  if (const Json* u = r.child("uavs")) s.uavs = read_uavs(*u, "uavs");
  r.has("slot");
  r.has("stream");
  r.finish();
  if (static_cast<int>(s.users.size()) != s.config.num_users)
    schema_error("users", "length differs from config.num_users");
  if (static_cast<int>(s.uavs.size()) != s.config.num_uavs)
    schema_error("uavs", "length differs from config.num_uavs");
  return s;
}

Json slot_context_json(const SlotContext& ctx) {
  Json tasks = Json::array();
  for (const Task& t : ctx.tasks) tasks.push_back({{"bits", t.bits}, {"cycles_per_bit", t.cycles_per_bit}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "slot_context"},
          {"channel", to_json(ctx.channel)},
          {"users", users_json(ctx.users)},
          {"uavs", uavs_json(ctx.uavs)},
          {"tasks", tasks}};
}

SlotContext slot_context_from_json(const Json& j) {
  if (!j.is_object()) schema_error("", "expected a JSON object");
  if (j.value("kind", std::string("slot_context")) == "scenario") {
    const Scenario s = scenario_from_snapshot(j);
    int slot = 0;
    std::uint64_t stream = 0;
    if (j.contains("slot")) slot = j.at("slot").get<int>();
    if (j.contains("stream")) stream = j.at("stream").get<std::uint64_t>();
    return make_slot_context(s.users, s.uavs, generate_tasks(s, slot, stream), s.channel);
  }
  FieldReader r(j, "");
  check_schema_version(r, "");
  std::string kind;
  r.string("kind", kind);
  ChannelParams channel;
  if (const Json* c = r.child("channel")) read_channel_params(*c, channel, "channel");
  channel.validate();
  const Json* users = r.child("users");
  const Json* uavs = r.child("uavs");
  const Json* tasks = r.child("tasks");
  r.finish();
  if (!users || !uavs || !tasks) schema_error("", "slot context needs users, uavs and tasks");
  std::vector<Task> task_list;
  if (!tasks->is_array()) schema_error("tasks", "expected an array");
  for (std::size_t i = 0; i < tasks->size(); ++i) {
    FieldReader tr((*tasks)[i], "tasks[" + std::to_string(i) + "]");
    Task t;
    tr.number("bits", t.bits);
    tr.number("cycles_per_bit", t.cycles_per_bit);
    tr.finish();
    if (!(t.bits > 0.0) || !(t.cycles_per_bit > 0.0))
      schema_error("tasks[" + std::to_string(i) + "]", "bits and cycles_per_bit must be > 0");
    task_list.push_back(t);
  }
  auto user_list = read_users(*users, "users");
  if (task_list.size() != user_list.size()) schema_error("tasks", "need exactly one task per user");
  return make_slot_context(std::move(user_list), read_uavs(*uavs, "uavs"), std::move(task_list), channel);
}

Json allocation_json(const AllocationResult& r) {
  Json assignment = Json::array(), ingress = Json::array();
  for (int c : r.decision.assignment) assignment.push_back(choice_json(c));
  for (int c : r.decision.ingress) ingress.push_back(choice_json(c));
  return {{"schema_version", kSchemaVersion},
          {"kind", "allocation"},
          {"dor", r.dor},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"assignment", assignment},
          {"ingress", ingress},
          {"bandwidth_hz", r.decision.bandwidth_hz},
          {"cpu_hz", r.decision.cpu_hz},
          {"per_user_delay_s", r.metrics.per_user_delay},
          {"per_user_contribution", r.metrics.per_user_contribution}};
}

Json learner_json(const Maddpg& learner) {
  Json agents = Json::array();
  for (const Agent& a : learner.agents())
    agents.push_back({{"actor", mlp_json(a.actor)},
                      {"critic", mlp_json(a.critic)},
                      {"target_actor", mlp_json(a.target_actor)},
                      {"target_critic", mlp_json(a.target_critic)}});
  const InputScaling& s = learner.scaling();
  return {{"num_agents", learner.num_agents()},
          {"obs_dim", learner.obs_dim()},
          {"scaling",
           {{"obs_center", vector_json(s.obs_center)},
            {"obs_half_span", vector_json(s.obs_half_span)},
            {"action_scale", s.action_scale}}},
          {"train_config", to_json(learner.config())},
          {"agents", agents}};
}

Json checkpoint_json(const TrainResult& r) {
  Json j = learner_json(r.learner);
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "checkpoint";
  j["episodes_completed"] = r.history.episodes.size();
  j["buffer"] = {{"size", r.buffer_size}, {"cursor", r.buffer_cursor}};
  j["rng_state"] = {{"noise", r.noise_rng_state}, {"sample", r.sample_rng_state}};
  return j;
}

Maddpg learner_from_json(const Json& j) {
  try {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) schema_error("schema_version", "unsupported version");
    TrainConfig config;
    read_train_config(j.at("train_config"), config, "train_config");
    InputScaling scaling;
    const Json& sj = j.at("scaling");
    scaling.obs_center = vector_from(sj.at("obs_center"), "scaling.obs_center");
    scaling.obs_half_span = vector_from(sj.at("obs_half_span"), "scaling.obs_half_span");
    scaling.action_scale = sj.at("action_scale").get<double>();
    Maddpg learner(j.at("num_agents").get<int>(), j.at("obs_dim").get<int>(), scaling, config);
    const Json& agents = j.at("agents");
    if (!agents.is_array() || static_cast<int>(agents.size()) != learner.num_agents())
      schema_error("agents", "agent count mismatch");
    for (int n = 0; n < learner.num_agents(); ++n) {
      const std::string p = "agents[" + std::to_string(n) + "]";
      Agent& a = learner.agents()[n];
      mlp_from_json(agents[n].at("actor"), a.actor, p + ".actor");
      mlp_from_json(agents[n].at("critic"), a.critic, p + ".critic");
      mlp_from_json(agents[n].at("target_actor"), a.target_actor, p + ".target_actor");
      mlp_from_json(agents[n].at("target_critic"), a.target_critic, p + ".target_critic");
    }
    return learner;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed checkpoint: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw Error(ErrorCode::kConfig, path.string() + ": file is empty");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string() + ": " + ec.message());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

}  // namespace uavmec
