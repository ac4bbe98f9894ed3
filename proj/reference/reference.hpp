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

#include <Eigen/Dense>

#include "pabf/errors.hpp"

// Serial reference implementations, written as literal transcriptions with
// explicit loops and no code shared with the optimized library. They exist
// to cross-check the optimized kernels (tests, acceptance suite, benchmark)
// and are not built for speed.
namespace pabf::reference {

/// Sum over i<j of compressed pair products, explicit double loop.
double dmas_pairwise(const Eigen::VectorXd& x);

/// Same without amplitude compression.
double pair_sum_pairwise(const Eigen::VectorXd& y);

/// Sum over all ordered pairs i != j, explicit double loop.
double mdmas_pairwise(const Eigen::VectorXd& x);

/// Spatially smoothed, temporally averaged covariance by direct triple
/// summation over rows, subarrays and entries.
Eigen::MatrixXd covariance_direct(const Eigen::MatrixXd& window, int subarray_len);

/// Dense solve by Gaussian elimination with partial pivoting. Throws
/// NumericalError on a vanishing pivot.
Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b);

/// Minimum-variance weights by gauss_solve against the ones vector.
Eigen::VectorXd mv_weights_direct(const Eigen::MatrixXd& r_loaded);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues
/// descending, eigenvector columns matched and orthonormal.
void jacobi_eig(const Eigen::MatrixXd& a, Eigen::VectorXd& evals, Eigen::MatrixXd& evecs);

/// Direct subarray-averaged MV pixel: covariance, loading, weights and the
/// explicit (1/(M-L+1)) Sum_l w.x^l output at the center row.
double mv_pixel_direct(const Eigen::MatrixXd& window, int subarray_len, double loading);

/// As mv_pixel_direct with the eigenspace projection of the weights.
double eibmv_pixel_direct(const Eigen::MatrixXd& window, int subarray_len, double loading,
                          double eig_threshold);

/// Unoptimized transcription of the full two-stage expansion beamformer.
double eibmv_dmas_pixel_direct(const Eigen::MatrixXd& window, int subarray_len, double loading,
                               double eig_threshold, bool compress_inputs);

} // namespace pabf::reference
