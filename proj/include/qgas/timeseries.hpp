/*
 * Copyright 2026 The qgas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qgas {

/// Samples on the uniform grid t_i = t0 + i (t1 - t0) / (n - 1).
struct TimeSeries {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> values;
  std::string meta;

  TimeSeries() = default;
  TimeSeries(double start, double stop, std::vector<double> v, std::string m = {});

  std::size_t n_samples() const { return values.size(); }
  double t(std::size_t i) const;
  std::vector<double> times() const;
};

/// Shortest decimal form that round-trips (at most 17 significant digits), '.' separator.
std::string format_double(double v);

/// Header `t,value`, one row per sample.
void write_csv(std::ostream& out, const TimeSeries& series);

}  // namespace qgas
