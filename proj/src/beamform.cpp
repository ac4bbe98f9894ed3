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

#include "pabf/beamform.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pabf::beamform {

std::string method_name(Method m) {
  switch (m) {
    case Method::das: return "das";
    case Method::dmas: return "dmas";
    case Method::mv: return "mv";
    case Method::eibmv: return "eibmv";
    case Method::eibmv_dmas: return "eibmv_dmas";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "das") return Method::das;
  if (name == "dmas") return Method::dmas;
  if (name == "mv") return Method::mv;
  if (name == "eibmv") return Method::eibmv;
  if (name == "eibmv_dmas") return Method::eibmv_dmas;
  throw ConfigError("unknown beamformer method '" + name + "'");
}

void BeamformerConfig::validate(int m_elements) const {
  if (m_elements < 2) throw ConfigError("beamformer: need at least 2 elements");
  switch (method) {
    case Method::das:
    case Method::dmas:
      break;
    case Method::mv:
    case Method::eibmv:
      cov.validate(m_elements);
      break;
    case Method::eibmv_dmas:
      if (m_elements < 4) throw ConfigError("beamformer: eibmv_dmas needs at least 4 elements");
      cov.validate(m_elements);
      break;
  }
}

double das(const Eigen::VectorXd& x) { return das_sum(x); }

double pair_sum(const Eigen::VectorXd& y) {
  double s = 0.0, q = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    s += y[i];
    q += y[i] * y[i];
  }
  return (s * s - q) / 2.0;
}

static Eigen::VectorXd compress(const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = signed_sqrt(x[i]);
  return y;
}

double dmas(const Eigen::VectorXd& x) { return pair_sum(compress(x)); }

double mdmas(const Eigen::VectorXd& x) { return 2.0 * dmas(x); }

Eigen::VectorXd mv_weights(const Eigen::MatrixXd& r_loaded) {
  const int l = static_cast<int>(r_loaded.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(r_loaded);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("mv_weights: factorization of loaded covariance failed");
  Eigen::VectorXd rinv_a = ldlt.solve(Eigen::VectorXd::Ones(l));
  double denom = 0.0;
  for (int i = 0; i < l; ++i) denom += rinv_a[i];
  if (!std::isfinite(denom) || denom == 0.0 || !rinv_a.allFinite())
    throw NumericalError("mv_weights: singular loaded covariance");
  return rinv_a / denom;
}

Eigen::VectorXd eibmv_weights(const Eigen::MatrixXd& r_loaded, const Eigen::VectorXd& w_opt,
                              double eig_threshold) {
  const cov::EigPair eig = cov::eig_sym(r_loaded);
  const Eigen::MatrixXd es = cov::signal_subspace(eig, eig_threshold);
  return es * (es.transpose() * w_opt);
}

Eigen::VectorXd full_aperture_weights(const Eigen::VectorXd& w_sub, int m_elements) {
  const int l = static_cast<int>(w_sub.size());
  const int n_sub = m_elements - l + 1;
  if (n_sub < 1) throw ConfigError("full_aperture_weights: subarray longer than aperture");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m_elements);
  for (int start = 0; start < n_sub; ++start)
    for (int i = 0; i < l; ++i) w[start + i] += w_sub[i];
  w /= static_cast<double>(n_sub);
  return w;
}

static double dot_seq(const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

static double constraint_violation(const Eigen::VectorXd& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w[i];
  return std::abs(s - 1.0);
}

// Shared MV/EIBMV stage: covariance -> loading -> weights -> full aperture.
// Returns false when the window carries no energy at all (output is 0).
static bool adaptive_weights(const Eigen::MatrixXd& window, const cov::CovConfig& cc,
                             bool project, Eigen::VectorXd& w_full, double& violation) {
  const int m = static_cast<int>(window.cols());
  const Eigen::MatrixXd r = cov::estimate_covariance(window, cc.subarray_len);
  if (r.trace() <= 0.0) return false;
  const Eigen::MatrixXd r_loaded = cov::diagonal_load(r, cc.resolved_loading());
  Eigen::VectorXd w = mv_weights(r_loaded);
  violation = constraint_violation(w);
  if (project) w = eibmv_weights(r_loaded, w, cc.eig_threshold);
  w_full = full_aperture_weights(w, m);
  return true;
}

PixelOut mv_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  const int m = static_cast<int>(window.cols());
  const Eigen::VectorXd center = window.row(static_cast<int>(window.rows()) / 2);
  if (cfg.uniform_weight_debug) return {das_sum(center) / m, 0.0};

  Eigen::VectorXd w_full;
  double violation = 0.0;
  if (!adaptive_weights(window, cfg.cov, false, w_full, violation)) return {0.0, 0.0};
  return {dot_seq(w_full, center), violation};
}

PixelOut eibmv_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  const int m = static_cast<int>(window.cols());
  const Eigen::VectorXd center = window.row(static_cast<int>(window.rows()) / 2);
  if (cfg.uniform_weight_debug) return {das_sum(center) / m, 0.0};

  Eigen::VectorXd w_full;
  double violation = 0.0;
  if (!adaptive_weights(window, cfg.cov, true, w_full, violation)) return {0.0, 0.0};
  return {dot_seq(w_full, center), violation};
}

Eigen::MatrixXd expansion_terms(const Eigen::MatrixXd& window, const Eigen::VectorXd& w_full) {
  const int rows = static_cast<int>(window.rows());
  const int m = static_cast<int>(window.cols());
  Eigen::MatrixXd terms(rows, m);
  for (int n = 0; n < rows; ++n) {
    double inner = 0.0;
    for (int j = 0; j < m; ++j) inner += w_full[j] * window(n, j);
    for (int i = 0; i < m; ++i) {
      const double xi = window(n, i);
      terms(n, i) = xi * inner - w_full[i] * xi * xi;
    }
  }
  return terms;
}

PixelOut eibmv_dmas_pixel_ex(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  const int rows = static_cast<int>(window.rows());
  const int m = static_cast<int>(window.cols());
  const int center = rows / 2;

  // Stage 0: amplitude compression ahead of any product.
  Eigen::MatrixXd y;
  if (cfg.signed_sqrt_inputs) {
    y.resize(rows, m);
    for (int n = 0; n < rows; ++n)
      for (int i = 0; i < m; ++i) y(n, i) = signed_sqrt(window(n, i));
  } else {
    y = window;
  }

  if (cfg.uniform_weight_debug) {
    // With every weight forced to 1/M both stages reduce to the ordered
    // cross-product sum scaled by 1/M^2; evaluated in that exact form.
    const Eigen::VectorXd yc = y.row(center);
    return {2.0 * pair_sum(yc) / static_cast<double>(m * m), 0.0};
  }

  // Stage 1: EIBMV on the compressed window -> full-aperture inner weights.
  Eigen::VectorXd w1;
  double viol1 = 0.0;
  if (!adaptive_weights(y, cfg.cov, true, w1, viol1)) return {0.0, 0.0};

  // Stage 2: per-row term vectors of the expanded cross-product sum.
  const Eigen::MatrixXd terms = expansion_terms(y, w1);

  // Stage 3: second EIBMV pass over the terms, steering still all ones.
  Eigen::VectorXd w2;
  double viol2 = 0.0;
  if (!adaptive_weights(terms, cfg.cov, true, w2, viol2))
    return {0.0, std::max(viol1, viol2)};
  const Eigen::VectorXd t_center = terms.row(center);
  return {dot_seq(w2, t_center), std::max(viol1, viol2)};
}

double mv_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  return mv_pixel_ex(window, cfg).value;
}
double eibmv_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  return eibmv_pixel_ex(window, cfg).value;
}
double eibmv_dmas_pixel(const Eigen::MatrixXd& window, const BeamformerConfig& cfg) {
  return eibmv_dmas_pixel_ex(window, cfg).value;
}

Eigen::MatrixXd build_pixel_window(const RfFrame& frame, const std::vector<double>& delays,
                                   int temporal_halfwin) {
  const int rows = 2 * temporal_halfwin + 1;
  const int m = static_cast<int>(delays.size());
  Eigen::MatrixXd window(rows, m);
  for (int n = 0; n < rows; ++n) {
    const DelayedSamples ds = extract_delayed(frame, delays, n - temporal_halfwin);
    window.row(n) = ds.values;
  }
  return window;
}

BeamformedImage beamform_image(const RfFrame& frame, const ImagingGrid& grid,
                               const ArrayGeometry& geom, const BeamformerConfig& cfg,
                               int threads) {
  frame.validate();
  grid.validate();
  geom.validate();
  cfg.validate(geom.elements());
  if (frame.channels != geom.elements())
    throw ConfigError("beamform: frame channel count does not match geometry");

  BeamformedImage img;
  img.nx = grid.nx;
  img.nz = grid.nz;
  img.grid = grid;
  img.method = cfg.method;
  img.values.assign(static_cast<std::size_t>(grid.nx) * grid.nz, 0.0);

  const bool mv_family = cfg.method == Method::mv || cfg.method == Method::eibmv ||
                         cfg.method == Method::eibmv_dmas;
  const int halfwin = mv_family ? cfg.cov.temporal_halfwin : 0;

  std::vector<long long> fails(grid.nx, 0);
  std::vector<double> violations(grid.nx, 0.0);

#ifdef _OPENMP
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
#else
  (void)threads;
#endif
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double px = grid.x_at(ix);
    long long local_fails = 0;
    double local_violation = 0.0;
    double* column = img.values.data() + static_cast<std::size_t>(ix) * grid.nz;
    for (int iz = 0; iz < grid.nz; ++iz) {
      const std::vector<double> delays = compute_delays(px, grid.z_at(iz), geom);
      double v = 0.0;
      switch (cfg.method) {
        case Method::das: {
          v = das(extract_delayed(frame, delays, 0.0).values);
          break;
        }
        case Method::dmas: {
          const Eigen::VectorXd x = extract_delayed(frame, delays, 0.0).values;
          v = cfg.signed_sqrt_inputs ? dmas(x) : pair_sum(x);
          break;
        }
        default: {
          const Eigen::MatrixXd window = build_pixel_window(frame, delays, halfwin);
          try {
            PixelOut out;
            if (cfg.method == Method::mv)
              out = mv_pixel_ex(window, cfg);
            else if (cfg.method == Method::eibmv)
              out = eibmv_pixel_ex(window, cfg);
            else
              out = eibmv_dmas_pixel_ex(window, cfg);
            v = out.value;
            local_violation = std::max(local_violation, out.inner_violation);
          } catch (const NumericalError&) {
            v = 0.0;
            ++local_fails;
          }
          break;
        }
      }
      column[iz] = v;
    }
    fails[ix] = local_fails;
    violations[ix] = local_violation;
  }

  for (int ix = 0; ix < grid.nx; ++ix) {
    img.failed_pixels += fails[ix];
    img.max_inner_violation = std::max(img.max_inner_violation, violations[ix]);
  }
  return img;
}

} // namespace pabf::beamform
