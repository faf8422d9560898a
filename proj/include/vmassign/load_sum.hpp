// Copyright 2026 The vmassign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VMASSIGN_LOAD_SUM_HPP
#define VMASSIGN_LOAD_SUM_HPP

#include <cmath>
#include <span>

namespace vmassign {

// Running machine load with Neumaier compensation. Accumulated loads round
// like the exact sum of their parts, so threshold tests such as
// "load <= x*/2" agree with exact arithmetic on decimal inputs (50 * 0.01
// gives 0.5, not 0.5000000000000002).
class LoadSum {
 public:
  LoadSum() = default;
  explicit LoadSum(double x) : sum_(x) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double accurate_sum(std::span<const double> xs) {
  LoadSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace vmassign

#endif  // VMASSIGN_LOAD_SUM_HPP
