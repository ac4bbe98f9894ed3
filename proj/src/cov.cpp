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

#include "pabf/cov.hpp"

#include <cmath>
#include <vector>

namespace pabf::cov {

void CovConfig::validate(int m_elements) const {
  if (subarray_len < 1) throw ConfigError("cov: subarray length must be >= 1");
  if (2 * subarray_len > m_elements)
    throw ConfigError("cov: subarray length must be <= M/2");
  if (temporal_halfwin < 0) throw ConfigError("cov: temporal half-window must be >= 0");
  if (loading_factor >= 0.0 && !std::isfinite(loading_factor))
    throw ConfigError("cov: loading factor must be finite");
  if (!(eig_threshold >= 0.0 && eig_threshold < 1.0))
    throw ConfigError("cov: eigenvalue threshold must be in [0, 1)");
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& window, int subarray_len) {
  const int rows = static_cast<int>(window.rows());
  const int m = static_cast<int>(window.cols());
  const int l = subarray_len;
  if (l < 1 || l > m) throw ConfigError("cov: subarray length out of range for window");
  const int n_sub = m - l + 1;

  // R[i][j] only depends on the offset d = j - i through sliding sums of the
  // product sequence x[t]*x[t+d]; prefix sums give every entry of one
  // diagonal in O(M) instead of accumulating full outer products.
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(l, l);
  std::vector<double> prefix(static_cast<std::size_t>(m) + 1);
  for (int n = 0; n < rows; ++n) {
    const auto row = window.row(n);
    for (int d = 0; d < l; ++d) {
      const int n_prod = m - d;
      prefix[0] = 0.0;
      for (int t = 0; t < n_prod; ++t) prefix[t + 1] = prefix[t] + row[t] * row[t + d];
      for (int i = 0; i + d < l; ++i) {
        const double s = prefix[i + n_sub] - prefix[i];
        r(i, i + d) += s;
        if (d != 0) r(i + d, i) += s;
      }
    }
  }
  r /= static_cast<double>(rows) * n_sub;
  return r;
}

Eigen::MatrixXd diagonal_load(const Eigen::MatrixXd& r, double loading_factor) {
  Eigen::MatrixXd out = r;
  const double shift = loading_factor * r.trace();
  out.diagonal().array() += shift;
  return out;
}

EigPair eig_sym(const Eigen::MatrixXd& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_sym: eigensolver did not converge");

  const int l = static_cast<int>(r.rows());
  EigPair out;
  out.eigenvalues.resize(l);
  out.eigenvectors.resize(l, l);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < l; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()[l - 1 - i];
    out.eigenvectors.col(i) = solver.eigenvectors().col(l - 1 - i);
  }
  // Deterministic column signs: largest-magnitude entry positive.
  for (int i = 0; i < l; ++i) {
    int arg = 0;
    double best = std::abs(out.eigenvectors(0, i));
    for (int j = 1; j < l; ++j) {
      const double a = std::abs(out.eigenvectors(j, i));
      if (a > best) {
        best = a;
        arg = j;
      }
    }
    if (out.eigenvectors(arg, i) < 0.0) out.eigenvectors.col(i) = -out.eigenvectors.col(i);
  }
  return out;
}

Eigen::MatrixXd signal_subspace(const EigPair& eig, double eig_threshold) {
  const int l = static_cast<int>(eig.eigenvalues.size());
  const double cut = eig_threshold * eig.eigenvalues[0];
  int num = 0;
  for (int i = 0; i < l; ++i)
    if (eig.eigenvalues[i] > cut) ++num;
  if (num < 1) num = 1;
  return eig.eigenvectors.leftCols(num);
}

} // namespace pabf::cov
