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

#ifndef ELBOOT_CLOCK_HPP_
#define ELBOOT_CLOCK_HPP_

#include <chrono>
#include <cstdint>
#include <mutex>

namespace elboot {

using Milliseconds = std::chrono::milliseconds;
using TimePoint = std::chrono::sys_time<Milliseconds>;

std::int64_t to_epoch_ms(TimePoint t);
TimePoint from_epoch_ms(std::int64_t ms);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
  virtual void sleep_until(TimePoint t) = 0;
};

class SystemClock final : public Clock {
 public:
  TimePoint now() const override;
  void sleep_until(TimePoint t) override;
};

// Manually driven clock for tests. sleep_until() advances time instead of
// blocking.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(TimePoint start = from_epoch_ms(1'600'000'000'000))
      : now_(start) {}

  TimePoint now() const override;
  void sleep_until(TimePoint t) override;
  void advance(Milliseconds d);
  void set(TimePoint t);

 private:
  mutable std::mutex mu_;
  TimePoint now_;
};

}  // namespace elboot

#endif  // ELBOOT_CLOCK_HPP_
