#pragma once

#include <cstddef>

#include "lli/index.hpp"

namespace lli {

// In-order walk of `node` over [lo, hi]: each child slot is loaded once and
// scanned before the key that follows it. Pairs are appended in ascending
// key order while `budget` lasts.
void scan(const ModelNode& node, Key lo, Key hi, Timestamp ts, const GlobalClock& clock,
          RangeResult& out, std::size_t& budget);

inline Key saturating_end(Key key, Key width) {
  return width > kMaxKey - key ? kMaxKey : key + width;
}

}  // namespace lli
