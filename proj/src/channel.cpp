#include "uavmec/channel.hpp"

#include <cmath>
#include <numbers>

#include "uavmec/error.hpp"

namespace uavmec {
namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfig, "invalid channel params: " + what);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double shannon(double bandwidth_hz, double snr) {
  if (bandwidth_hz <= 0.0) return 0.0;
  return bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace

void ChannelParams::validate() const {
  if (!(a > 0.0)) config_error("a must be > 0");
  if (!(b > 0.0)) config_error("b must be > 0");
  if (!(eta_los_db <= eta_nlos_db)) config_error("eta_los_db must be <= eta_nlos_db");
  if (!(carrier_mhz > 0.0)) config_error("carrier_mhz must be > 0");
  if (!(noise_g2a_watts > 0.0)) config_error("noise_g2a_watts must be > 0");
  if (!(noise_a2a_watts > 0.0)) config_error("noise_a2a_watts must be > 0");
  if (!(bw_g2a_hz > 0.0)) config_error("bw_g2a_hz must be > 0");
  if (!(bw_a2a_hz > 0.0)) config_error("bw_a2a_hz must be > 0");
}

double elevation_angle_deg(const UserState& user, const UavState& uav, ElevationMode mode) {
  const double z = uav.position.z();
  const double horiz = horizontal_distance(user.position, uav.position);
  if (horiz == 0.0) return 90.0;
  const double base =
      mode == ElevationMode::kHorizontal ? horiz : (uav.position - user.position).norm();
  return 180.0 / std::numbers::pi * std::atan(z / base);
}

double los_probability(double theta_deg, const ChannelParams& p) {
  return 1.0 / (1.0 + p.a * std::exp(-p.b * (theta_deg - p.a)));
}

double ground_free_space_loss_db(double distance_m, double carrier_mhz) {
  if (!(distance_m > 0.0))
    throw Error(ErrorCode::kDomain, "path loss undefined at zero distance");
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_mhz) - 27.56;
}

double g2a_mean_path_loss_db(const UserState& user, const UavState& uav,
                             const ChannelParams& p) {
  const double dist = (uav.position - user.position).norm();
  const double fspl = ground_free_space_loss_db(dist, p.carrier_mhz);
  const double p_los = los_probability(elevation_angle_deg(user, uav, p.elevation), p);
  return p_los * (fspl + p.eta_los_db) + (1.0 - p_los) * (fspl + p.eta_nlos_db);
}

double g2a_spectral_efficiency(const UserState& user, const UavState& uav,
                               const ChannelParams& p) {
  const double loss = db_to_linear(g2a_mean_path_loss_db(user, uav, p));
  return std::log2(1.0 + user.tx_power / (loss * p.noise_g2a_watts));
}

double g2a_rate_bps(const UserState& user, const UavState& uav, double bandwidth_hz,
                    const ChannelParams& p) {
  if (bandwidth_hz <= 0.0) return 0.0;
  return bandwidth_hz * g2a_spectral_efficiency(user, uav, p);
}

double a2a_path_loss_db(const UavState& from, const UavState& to, const ChannelParams& p) {
  const double dist = (from.position - to.position).norm();
  if (!(dist > 0.0)) throw Error(ErrorCode::kDomain, "path loss undefined at zero distance");
  return 20.0 * std::log10(dist / 1000.0) + 20.0 * std::log10(p.carrier_mhz) + 32.45;
}

double a2a_rate_bps(const UavState& from, const UavState& to, double bandwidth_hz,
                    const ChannelParams& p) {
  if (bandwidth_hz <= 0.0) return 0.0;
  const double gain = std::pow(10.0, -a2a_path_loss_db(from, to, p) / 10.0);
  return shannon(bandwidth_hz, from.tx_power * gain / p.noise_a2a_watts);
}

}  // namespace uavmec
