#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>

namespace artrec {

// Milliseconds since the Unix epoch, UTC. Event logs store this integer as-is.
struct Timestamp {
  std::int64_t ms = 0;

  auto operator<=>(const Timestamp&) const = default;

  static Timestamp now() {
    using namespace std::chrono;
    return {duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count()};
  }
};

inline double minutes_between(Timestamp from, Timestamp to) {
  return static_cast<double>(to.ms - from.ms) / 60000.0;
}

// Injectable time source; the service uses the wall clock, tests a fake.
using Clock = std::function<Timestamp()>;

inline Clock system_clock() { return [] { return Timestamp::now(); }; }

}  // namespace artrec
