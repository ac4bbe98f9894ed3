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

#include "pabf/core.hpp"

#include <cmath>

namespace pabf {

ArrayGeometry ArrayGeometry::linear(int m, double pitch, double fs, double c) {
  ArrayGeometry g;
  g.pitch = pitch;
  g.fs = fs;
  g.c = c;
  g.element_x.resize(m);
  g.element_z.assign(m, 0.0);
  const double x0 = -0.5 * (m - 1) * pitch;
  for (int i = 0; i < m; ++i) g.element_x[i] = x0 + i * pitch;
  return g;
}

void ArrayGeometry::validate() const {
  if (elements() < 2) throw ConfigError("geometry: need at least 2 elements");
  if (element_z.size() != element_x.size())
    throw ConfigError("geometry: element_x/element_z size mismatch");
  if (!(fs > 0.0)) throw ConfigError("geometry: sampling rate must be > 0");
  if (!(c > 0.0)) throw ConfigError("geometry: speed of sound must be > 0");
  for (std::size_t i = 0; i + 1 < element_x.size(); ++i) {
    if (!(element_x[i] < element_x[i + 1]))
      throw ConfigError("geometry: element x positions must be strictly increasing");
  }
  for (double v : element_x)
    if (!std::isfinite(v)) throw ConfigError("geometry: non-finite element position");
  for (double v : element_z)
    if (!std::isfinite(v)) throw ConfigError("geometry: non-finite element position");
}

RfFrame RfFrame::zeros(int channels, int t_samples, double fs, double t0) {
  RfFrame f;
  f.channels = channels;
  f.t_samples = t_samples;
  f.fs = fs;
  f.t0 = t0;
  f.samples.assign(static_cast<std::size_t>(channels) * t_samples, 0.0);
  return f;
}

void RfFrame::validate() const {
  if (channels < 1 || t_samples < 1) throw ConfigError("rf frame: empty dimensions");
  if (samples.size() != static_cast<std::size_t>(channels) * t_samples)
    throw ConfigError("rf frame: sample buffer size mismatch");
  if (!(fs > 0.0)) throw ConfigError("rf frame: sampling rate must be > 0");
  for (double v : samples)
    if (!std::isfinite(v)) throw ConfigError("rf frame: non-finite sample");
}

void ImagingGrid::validate() const {
  if (nx < 1 || nz < 1) throw ConfigError("grid: pixel counts must be >= 1");
  if (!(x_min < x_max)) throw ConfigError("grid: x_min must be < x_max");
  if (!(z_min < z_max)) throw ConfigError("grid: z_min must be < z_max");
}

std::vector<double> compute_delays(double px, double pz, const ArrayGeometry& geom) {
  const int m = geom.elements();
  std::vector<double> delays(m);
  const double scale = geom.fs / geom.c;
  for (int i = 0; i < m; ++i) {
    const double dx = px - geom.element_x[i];
    const double dz = pz - geom.element_z[i];
    delays[i] = std::sqrt(dx * dx + dz * dz) * scale;
  }
  return delays;
}

DelayedSamples extract_delayed(const RfFrame& frame, const std::vector<double>& delays, double k) {
  const int m = static_cast<int>(delays.size());
  DelayedSamples out;
  out.values = Eigen::VectorXd::Zero(m);
  out.valid.assign(m, 0);
  const double t_last = static_cast<double>(frame.t_samples - 1);
  for (int i = 0; i < m; ++i) {
    const double pos = delays[i] - frame.t0 * frame.fs + k;
    if (pos < 0.0 || pos > t_last) continue;
    const int i0 = static_cast<int>(pos);
    const double frac = pos - i0;
    double v;
    if (frac == 0.0) {
      v = frame.at(i, i0);
    } else {
      v = (1.0 - frac) * frame.at(i, i0) + frac * frame.at(i, i0 + 1);
    }
    out.values[i] = v;
    out.valid[i] = 1;
  }
  return out;
}

double das_sum(const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i];
  return s;
}

} // namespace pabf
