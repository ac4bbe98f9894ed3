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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pabf/core.hpp"
#include "pabf/cov.hpp"

namespace pabf::beamform {

enum class Method { das, dmas, mv, eibmv, eibmv_dmas };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct BeamformerConfig {
  Method method = Method::das;
  cov::CovConfig cov;
  /// Compress delayed samples with signed_sqrt before any product
  /// (DMAS-family methods).
  bool signed_sqrt_inputs = true;
  /// Forces every adaptive weight to 1/M so the adaptive beamformers
  /// collapse to closed forms; used by the algebraic-reduction tests.
  bool uniform_weight_debug = false;

  void validate(int m_elements) const;
};

/// Plain coherent sum of the time-aligned samples.
double das(const Eigen::VectorXd& x);

/// Sum of all unordered pair products Sum_{i<j} y_i*y_j without amplitude
/// compression, computed through ((Sum y)^2 - Sum y^2) / 2.
double pair_sum(const Eigen::VectorXd& y);

/// DMAS output: pair_sum of the signed-sqrt compressed samples.
double dmas(const Eigen::VectorXd& x);

/// Every ordered cross product counted, i.e. exactly 2 * dmas(x).
double mdmas(const Eigen::VectorXd& x);

/// Minimum-variance weights for the all-ones steering vector:
/// w = R^-1 1 / (1^T R^-1 1). Throws NumericalError when the loaded matrix
/// is singular.
Eigen::VectorXd mv_weights(const Eigen::MatrixXd& r_loaded);

/// MV weights projected onto the signal subspace of the loaded covariance:
/// W = E_s E_s^T w_opt.
Eigen::VectorXd eibmv_weights(const Eigen::MatrixXd& r_loaded, const Eigen::VectorXd& w_opt,
                              double eig_threshold);

/// Spreads length-L subarray weights onto the full aperture so that
/// w_full . x == (1/(M-L+1)) * Sum_l w_sub . x^l for every x: each subarray
/// position receives a copy of w_sub, overlaps accumulate, and the result is
/// divided by M-L+1.
Eigen::VectorXd full_aperture_weights(const Eigen::VectorXd& w_sub, int m_elements);

/// Per-pixel value plus the worst |w^T 1 - 1| of the minimum-variance
/// solves that produced it.
struct PixelOut {
  double value = 0.0;
  double inner_violation = 0.0;
};

PixelOut mv_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);
PixelOut eibmv_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);
PixelOut eibmv_dmas_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);

double mv_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);
double eibmv_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);
double eibmv_dmas_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg);

/// Stage-2 term vectors of the two-stage beamformer: for each time row,
/// t_i = x_i * (w . x) - w_i * x_i^2 with the stage-1 full-aperture weights.
Eigen::MatrixXd expansion_terms(const Eigen::MatrixXd& window, const Eigen::VectorXd& w_full);

/// (2K+1) x M matrix of delayed samples centered on the pixel's focal time.
Eigen::MatrixXd build_pixel_window(const RfFrame& frame, const std::vector<double>& delays,
                                   int temporal_halfwin);

/// Raw beamformed image, scanline-contiguous: values[ix * nz + iz].
struct BeamformedImage {
  std::vector<double> values;
  int nx = 0, nz = 0;
  ImagingGrid grid;
  Method method = Method::das;
  long long failed_pixels = 0;       // pixels zeroed after a numerical failure
  double max_inner_violation = 0.0;  // worst |w^T 1 - 1| across all pixels
};

/// Per-pixel driver. Scanlines are distributed across OpenMP workers and
/// each scanline is computed sequentially by one worker, so the output is
/// bitwise independent of the thread count. threads = 0 uses the OpenMP
/// default.
BeamformedImage beamform_image(const RfFrame& frame, const ImagingGrid& grid,
                               const ArrayGeometry& geom, const BeamformerConfig& cfg,
                               int threads = 0);

} // namespace pabf::beamform
