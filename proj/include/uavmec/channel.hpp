#pragma once

#include "uavmec/channel_params.hpp"
#include "uavmec/model.hpp"

namespace uavmec {

/// Elevation angle in degrees in (0, 90]. Coincident horizontal positions
/// give exactly 90. ElevationMode::kSlant uses the 3D distance in the
/// denominator instead of the horizontal one.
double elevation_angle_deg(const UserState& user, const UavState& uav,
                           ElevationMode mode = ElevationMode::kHorizontal);

double los_probability(double theta_deg, const ChannelParams& params);

/// Free-space loss with the distance in metres and the carrier in MHz.
double ground_free_space_loss_db(double distance_m, double carrier_mhz);

double g2a_mean_path_loss_db(const UserState& user, const UavState& uav,
                             const ChannelParams& params);

/// log2(1 + SNR) of the user -> UAV link, i.e. rate per hertz.
double g2a_spectral_efficiency(const UserState& user, const UavState& uav,
                               const ChannelParams& params);

double g2a_rate_bps(const UserState& user, const UavState& uav,
                    double bandwidth_hz, const ChannelParams& params);

double a2a_path_loss_db(const UavState& from, const UavState& to,
                        const ChannelParams& params);

double a2a_rate_bps(const UavState& from, const UavState& to,
                    double bandwidth_hz, const ChannelParams& params);

}  // namespace uavmec
