#pragma once

namespace uavmec {

enum class ElevationMode { kHorizontal, kSlant };

/// Radio constants for the ground-to-air and air-to-air links. The carrier is
/// stored in MHz, which is the unit the path-loss constants assume.
struct ChannelParams {
  double a = 9.61;
  double b = 0.16;
  double eta_los_db = 1.0;
  double eta_nlos_db = 20.0;
  double carrier_mhz = 2000.0;
  double noise_g2a_watts = 1e-10;  // -70 dBm
  double noise_a2a_watts = 1e-10;
  double bw_g2a_hz = 20e6;
  double bw_a2a_hz = 20e6;
  ElevationMode elevation = ElevationMode::kHorizontal;

  void validate() const;
};

}  // namespace uavmec
