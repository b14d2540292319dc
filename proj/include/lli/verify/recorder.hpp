#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lli/index.hpp"
#include "lli/verify/history.hpp"

namespace lli::verify {

// Per-thread append-only event logs stamped from one shared tick counter.
class HistoryRecorder {
 public:
  explicit HistoryRecorder(std::size_t threads) : logs_(threads) {}

  // Runs `op` on behalf of `thread` and records invocation/response ticks.
  OpResult record(Index& index, std::uint32_t thread, const Operation& op);

  // All events merged and ordered by invocation tick.
  std::vector<HistoryEvent> merged() const;

 private:
  std::atomic<std::uint64_t> tick_{0};
  std::vector<std::vector<HistoryEvent>> logs_;
};

struct RandomHistorySpec {
  std::size_t threads = 3;
  std::size_t max_ops = 12;
  Key key_domain = 8;
  Value value_domain = 3;
  bool with_ranges = true;
  std::size_t prefill = 3;
};

struct RecordedHistory {
  std::vector<std::pair<Key, Value>> initial;
  std::vector<HistoryEvent> events;
};

// Records a random history against a tiny index configured so that bins are
// transformed within a handful of operations. With `deterministic` the
// threads are interleaved by a seeded DeterministicScheduler; otherwise they
// run freely.
RecordedHistory record_random_history(const RandomHistorySpec& spec, std::uint64_t seed,
                                      bool deterministic);

IndexConfig tiny_index_config();

}  // namespace lli::verify
