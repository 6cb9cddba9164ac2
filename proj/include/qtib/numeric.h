/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTIB_NUMERIC_H_
#define QTIB_NUMERIC_H_

#include <cmath>
#include <span>

namespace qtib {

// Neumaier-compensated running sum. The node-sum objective adds thousands
// of small terms of both signs, so plain accumulation is not accurate enough
// for the 1e-9 cross-check against the direct Lagrangian at depth 7.
class CompensatedSum {
 public:
  void Add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double CompensatedTotal(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.Add(v);
  return s.value();
}

// x * log2(x) with the 0 log 0 = 0 convention.
inline double XLog2X(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace qtib

#endif  // QTIB_NUMERIC_H_
