// Copyright 2026 The elboot Authors.
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

#include "elboot/clock.hpp"

#include <algorithm>
#include <thread>

namespace elboot {

std::int64_t to_epoch_ms(TimePoint t) { return t.time_since_epoch().count(); }

TimePoint from_epoch_ms(std::int64_t ms) { return TimePoint(Milliseconds(ms)); }

TimePoint SystemClock::now() const {
  return std::chrono::time_point_cast<Milliseconds>(
      std::chrono::system_clock::now());
}

void SystemClock::sleep_until(TimePoint t) { std::this_thread::sleep_until(t); }

TimePoint VirtualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::sleep_until(TimePoint t) {
  std::lock_guard lock(mu_);
  now_ = std::max(now_, t);
}

void VirtualClock::advance(Milliseconds d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

void VirtualClock::set(TimePoint t) {
  std::lock_guard lock(mu_);
  now_ = t;
}

}  // namespace elboot
