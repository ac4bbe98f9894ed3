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

namespace pabf::cov {

/// Parameters of the covariance pipeline shared by the MV-family
/// beamformers. loading_factor < 0 means "auto": 1 / (10 * subarray_len).
struct CovConfig {
  int subarray_len = 0;      // L, sliding subaperture length
  int temporal_halfwin = 0;  // K, covariance averaged over 2K+1 time rows
  double loading_factor = -1.0;
  double eig_threshold = 0.0;  // keep eigenvectors with lambda > threshold * lambda_max

  double resolved_loading() const {
    return loading_factor < 0.0 ? 1.0 / (10.0 * subarray_len) : loading_factor;
  }

  /// Checks the subarray bounds against the aperture (1 <= L <= M/2,
  /// K >= 0, 0 <= eig_threshold < 1). Throws ConfigError.
  void validate(int m_elements) const;
};

/// Spatially smoothed, temporally averaged sample covariance.
///
/// window is (2K+1) x M, one row per time index around the focal instant
/// (rows that fell outside the record contain zeros). The estimate averages
/// the outer products of every length-L subvector of every row and divides
/// by rows * (M - L + 1) regardless of how many rows were clamped, so the
/// scale is comparable across depth.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& window, int subarray_len);

/// R + loading_factor * trace(R) * I.
Eigen::MatrixXd diagonal_load(const Eigen::MatrixXd& r, double loading_factor);

/// Eigendecomposition result, eigenvalues descending, matching orthonormal
/// eigenvector columns. Column signs are fixed: the largest-magnitude entry
/// of each eigenvector is positive.
struct EigPair {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Symmetric eigendecomposition. Throws NumericalError when the solver does
/// not converge.
EigPair eig_sym(const Eigen::MatrixXd& r);

/// Dominant eigenvector block: columns whose eigenvalue exceeds
/// eig_threshold times the largest. At least one column is always kept.
Eigen::MatrixXd signal_subspace(const EigPair& eig, double eig_threshold);

} // namespace pabf::cov
