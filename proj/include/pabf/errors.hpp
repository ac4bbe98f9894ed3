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

#include <stdexcept>
#include <string>

namespace pabf {

/// Invalid user-facing parameters: bad config text, out-of-range values,
/// inconsistent geometry. Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure at runtime: singular loaded covariance, eigensolver
/// non-convergence, undefined metric. Maps to exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem and format failures. Maps to exit code 3.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pabf
