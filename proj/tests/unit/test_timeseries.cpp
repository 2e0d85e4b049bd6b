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

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "qgas/timeseries.hpp"

using namespace qgas;

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("write_csv") {
  TimeSeries s(0.0, 1.0, {1.0, 0.25, 0.125});
  std::ostringstream out;
  write_csv(out, s);
  CHECK(out.str() == "t,value\n0,1\n0.5,0.25\n1,0.125\n");
  CHECK_THROWS(TimeSeries(0.0, 1.0, std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}));
}
