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

#include "qgas/timeseries.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qgas/common.hpp"

namespace qgas {

TimeSeries::TimeSeries(double start, double stop, std::vector<double> v, std::string m)
    : t0(start), t1(stop), values(std::move(v)), meta(std::move(m)) {
  detail::require(!values.empty(), "TimeSeries: no samples");
  detail::require(values.size() > 1 || t0 == t1, "TimeSeries: a single sample needs t0 == t1");
  detail::require(t1 >= t0, "TimeSeries: t1 < t0");
  for (double x : values) detail::require(std::isfinite(x), "TimeSeries: non-finite value");
}

double TimeSeries::t(std::size_t i) const {
  if (values.size() < 2) return t0;
  if (i + 1 == values.size()) return t1;
  return t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(values.size() - 1);
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = t(i);
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buf.data(), res.ptr};
}

void write_csv(std::ostream& out, const TimeSeries& series) {
  out << "t,value\n";
  for (std::size_t i = 0; i < series.values.size(); ++i)
    out << format_double(series.t(i)) << ',' << format_double(series.values[i]) << '\n';
}

}  // namespace qgas
