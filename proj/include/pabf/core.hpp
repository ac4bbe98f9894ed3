/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pabf/errors.hpp"

namespace pabf {

/// Receive aperture of a linear array. Positions are in meters, the array
/// normally lies on z = 0 with x strictly increasing.
struct ArrayGeometry {
  std::vector<double> element_x;
  std::vector<double> element_z;
  double pitch = 0.0;   // m
  double fs = 0.0;      // Hz
  double c = 0.0;       // m/s

  int elements() const { return static_cast<int>(element_x.size()); }

  /// Uniform pitch array centered on x = 0, elements on z = 0.
  static ArrayGeometry linear(int m, double pitch, double fs, double c);

  /// Throws ConfigError when any invariant is broken (M >= 2, fs > 0,
  /// c > 0, element_x strictly increasing).
  void validate() const;
};

/// One acquisition: channels x time samples of real RF data.
/// Samples are stored channel-major (all of channel 0, then channel 1, ...).
struct RfFrame {
  std::vector<double> samples;
  int channels = 0;
  int t_samples = 0;
  double fs = 0.0;  // Hz
  double t0 = 0.0;  // s, acquisition start time

  double at(int ch, int t) const { return samples[static_cast<std::size_t>(ch) * t_samples + t]; }
  double& at(int ch, int t) { return samples[static_cast<std::size_t>(ch) * t_samples + t]; }

  static RfFrame zeros(int channels, int t_samples, double fs, double t0 = 0.0);
  void validate() const;
};

/// Rectangular lateral x axial pixel lattice, endpoint inclusive.
/// Pixel (ix, iz) sits at (x_at(ix), z_at(iz)).
struct ImagingGrid {
  double x_min = 0.0, x_max = 0.0;  // m
  double z_min = 0.0, z_max = 0.0;  // m
  int nx = 0, nz = 0;

  double dx() const { return nx > 1 ? (x_max - x_min) / (nx - 1) : 0.0; }
  double dz() const { return nz > 1 ? (z_max - z_min) / (nz - 1) : 0.0; }
  double x_at(int ix) const { return nx > 1 ? x_min + ix * dx() : x_min; }
  double z_at(int iz) const { return nz > 1 ? z_min + iz * dz() : z_min; }

  void validate() const;
};

/// Time-aligned samples for one pixel. Entries whose delay fell outside the
/// recorded window are exactly 0 and flagged invalid; vector length stays M
/// so covariance estimation sees a fixed aperture.
struct DelayedSamples {
  Eigen::VectorXd values;
  std::vector<std::uint8_t> valid;
};

/// One-way photoacoustic time of flight from pixel (px, pz) to each element,
/// expressed in fractional samples: |pixel - element_i| * fs / c.
std::vector<double> compute_delays(double px, double pz, const ArrayGeometry& geom);

/// Reads each channel at fractional position delays[i] + k using linear
/// interpolation. Positions outside [0, T-1] yield 0 with valid = false.
/// k is an additive sample offset (0 for the focal instant itself).
DelayedSamples extract_delayed(const RfFrame& frame, const std::vector<double>& delays, double k);

/// sign(x) * sqrt(|x|), with sign(0) = 0. Amplitude compression used by the
/// DMAS family so pair products keep the dimension of the input.
inline double signed_sqrt(double x) {
  if (x > 0.0) return std::sqrt(x);
  if (x < 0.0) return -std::sqrt(-x);
  return 0.0;
}

/// Sequential left-to-right sum. Contract paths rely on this exact
/// association, so it is spelled out instead of using a vectorized reduce.
double das_sum(const Eigen::VectorXd& x);

} // namespace pabf
