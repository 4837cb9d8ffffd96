#include "uavmec/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "uavmec/error.hpp"

namespace uavmec {
namespace {

constexpr std::uint64_t kTaskTag = 0x7461736bULL;
constexpr std::uint64_t kMobilityTag = 0x6d6f6265ULL;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfig, "invalid scenario config: " + what);
}

void check_range(const Range& r, const char* name) {
  if (!(r.low > 0.0)) config_error(std::string(name) + ".low must be > 0");
  if (!(r.low <= r.high)) config_error(std::string(name) + ".low must be <= high");
}

// Always consumes one variate so that pinning a range (low == high) in a
// sweep leaves every other draw of the scenario unchanged.
double draw(std::mt19937_64& rng, const Range& r) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return r.low + u * (r.high - r.low);
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t stream, std::uint64_t slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), static_cast<std::uint32_t>(slot)};
  return std::mt19937_64(seq);
}

Vec3 random_ground_point(std::mt19937_64& rng, const ScenarioConfig& c) {
  std::uniform_real_distribution<double> ux(0.0, c.area_x);
  std::uniform_real_distribution<double> uy(0.0, c.area_y);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y, 0.0};
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(area_x > 0.0)) config_error("area_x must be > 0");
  if (!(area_y > 0.0)) config_error("area_y must be > 0");
  if (!(z_min > 0.0)) config_error("z_min must be > 0");
  if (!(z_min <= z_max)) config_error("z_min must be <= z_max");
  if (!(d_min > 0.0)) config_error("d_min must be > 0");
  if (!(v_max > 0.0)) config_error("v_max must be > 0");
  if (!(slot_seconds > 0.0)) config_error("slot_seconds must be > 0");
  if (num_users < 1) config_error("num_users must be >= 1");
  if (num_uavs < 1) config_error("num_uavs must be >= 1");
  if (horizon < 1) config_error("horizon must be >= 1");
  check_range(task_bits, "task_bits_range");
  check_range(task_cycles_per_bit, "task_cycles_per_bit_range");
  check_range(user_freq, "user_freq_range");
  check_range(user_power, "user_power_range");
  if (!(uav_freq > 0.0)) config_error("uav_freq must be > 0");
  if (!(uav_power > 0.0)) config_error("uav_power must be > 0");
  if (!(coverage_half_angle_deg >= 0.0 && coverage_half_angle_deg <= 90.0))
    config_error("coverage_half_angle_deg must lie in [0, 90]");
  if (!(user_speed >= 0.0)) config_error("user_speed must be >= 0");
  if (!uav_starts.empty()) {
    if (static_cast<int>(uav_starts.size()) != num_uavs)
      config_error("uav_starts must list exactly num_uavs positions");
    for (const Vec3& p : uav_starts) {
      if (p.x() < 0.0 || p.x() > area_x || p.y() < 0.0 || p.y() > area_y ||
          p.z() < z_min || p.z() > z_max)
        config_error("uav_starts entry outside the flight box");
    }
  } else if (num_uavs > 9) {
    config_error("num_uavs > 9 requires explicit uav_starts");
  }
}

std::vector<Vec3> default_uav_starts(const ScenarioConfig& c) {
  const double x = c.area_x, y = c.area_y, z = c.z_min;
  const std::vector<Vec3> layout = {
      {0, 0, z},         {0, y, z},         {x, 0, z},         {x, y, z},
      {x / 2, 0, z},     {0, y / 2, z},     {x, y / 2, z},     {x / 2, y, z},
      {x / 2, y / 2, z},
  };
  if (c.num_uavs > static_cast<int>(layout.size()))
    config_error("num_uavs > 9 requires explicit uav_starts");
  return {layout.begin(), layout.begin() + c.num_uavs};
}

Scenario build_scenario(const ScenarioConfig& config, const ChannelParams& channel) {
  config.validate();
  channel.validate();

  Scenario s;
  s.config = config;
  s.channel = channel;

  std::mt19937_64 rng(config.rng_seed);
  s.users.reserve(config.num_users);
  for (int m = 0; m < config.num_users; ++m) {
    UserState u;
    u.position = random_ground_point(rng, config);
    u.cpu_freq = draw(rng, config.user_freq);
    u.tx_power = draw(rng, config.user_power);
    s.users.push_back(u);
  }
  for (int m = 0; m < config.num_users; ++m)
    s.user_waypoints.push_back(random_ground_point(rng, config));

  const std::vector<Vec3> starts =
      config.uav_starts.empty() ? default_uav_starts(config) : config.uav_starts;
  for (const Vec3& p : starts) {
    UavState uav;
    uav.position = p;
    uav.cpu_freq = config.uav_freq;
    uav.tx_power = config.uav_power;
    uav.half_angle_deg = config.coverage_half_angle_deg;
    s.uavs.push_back(uav);
  }
  return s;
}

MotionOutcome apply_motion(const UavState& uav, const Vec3& delta,
                           const ScenarioConfig& config) {
  MotionOutcome out;
  Vec3 step = delta;
  const double limit = config.max_step();
  const double length = step.norm();
  if (length > limit) {
    step *= limit / length;
    out.speed_violation = true;
  }
  const Vec3 target = uav.position + step;
  const Vec3 lo(0.0, 0.0, config.z_min);
  const Vec3 hi(config.area_x, config.area_y, config.z_max);
  out.new_position = target.cwiseMax(lo).cwiseMin(hi);
  out.box_violation = (out.new_position != target);
  return out;
}

double coverage_radius(const UavState& uav) {
  if (uav.half_angle_deg >= 90.0) return std::numeric_limits<double>::infinity();
  return uav.position.z() * std::tan(uav.half_angle_deg * std::numbers::pi / 180.0);
}

double horizontal_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

bool is_covered(const UserState& user, const UavState& uav) {
  return horizontal_distance(user.position, uav.position) <= coverage_radius(uav);
}

double min_pairwise_distance(std::span<const UavState> uavs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < uavs.size(); ++i)
    for (std::size_t j = i + 1; j < uavs.size(); ++j)
      best = std::min(best, (uavs[i].position - uavs[j].position).norm());
  return best;
}

std::vector<Task> generate_tasks(const Scenario& scenario, int slot, std::uint64_t stream) {
  if (slot < 0 || slot >= scenario.config.horizon)
    throw Error(ErrorCode::kDomain, "generate_tasks: slot outside [0, horizon)");
  auto rng = derived_rng(scenario.config.rng_seed, kTaskTag, stream,
                         static_cast<std::uint64_t>(slot));
  std::vector<Task> tasks;
  tasks.reserve(scenario.users.size());
  for (std::size_t m = 0; m < scenario.users.size(); ++m) {
    Task t;
    t.bits = draw(rng, scenario.config.task_bits);
    t.cycles_per_bit = draw(rng, scenario.config.task_cycles_per_bit);
    tasks.push_back(t);
  }
  return tasks;
}

void advance_users(Scenario& scenario, int slot, std::uint64_t stream) {
  const ScenarioConfig& c = scenario.config;
  if (c.user_mobility == UserMobility::kStatic) return;
  auto rng = derived_rng(c.rng_seed, kMobilityTag, stream, static_cast<std::uint64_t>(slot));
  const double step = c.user_speed * c.slot_seconds;
  for (std::size_t m = 0; m < scenario.users.size(); ++m) {
    Vec3& pos = scenario.users[m].position;
    Vec3& goal = scenario.user_waypoints[m];
    const Vec3 to_goal = goal - pos;
    const double dist = to_goal.norm();
    if (dist <= step) {
      pos = goal;
      goal = random_ground_point(rng, c);
    } else {
      pos += to_goal * (step / dist);
    }
  }
}

}  // namespace uavmec
