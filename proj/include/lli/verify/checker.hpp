#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lli/verify/history.hpp"

namespace lli::verify {

struct LinearizabilityVerdict {
  bool linearizable = false;
  // Event indexes in linearization order (complete when linearizable).
  std::vector<std::size_t> witness;
  // When rejected: the longest legal partial order found, and the events that
  // were eligible to follow it but whose recorded results did not match.
  std::vector<std::size_t> failing_prefix;
  std::vector<std::size_t> blocked;
  std::size_t states_explored = 0;

  std::string describe(std::span<const HistoryEvent> history) const;
};

// Exhaustive memoized search for a sequential order that respects real-time
// precedence and reproduces every recorded result, starting from `initial`.
// Histories are limited to 64 events.
LinearizabilityVerdict check_linearizable(std::span<const HistoryEvent> history,
                                          std::span<const std::pair<Key, Value>> initial = {});

}  // namespace lli::verify
