#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "lli/verify/history.hpp"

namespace lli::verify {

using LiveMap = std::map<Key, Value>;

// Sequential semantics of one operation over the live key -> value map.
OpResult oracle_apply(LiveMap& live, const Operation& op);

// Sequential reference index that also keeps every key's full version
// history, numbered by a global sequence counter.
class Oracle {
 public:
  struct Version {
    Payload payload;
    std::uint64_t seq;
  };

  Oracle() = default;
  explicit Oracle(std::span<const std::pair<Key, Value>> initial);

  OpResult apply(const Operation& op);

  bool insert(Key key, Value value) { return apply(Operation::insert(key, value)).flag; }
  bool remove(Key key) { return apply(Operation::remove(key)).flag; }
  Payload search(Key key) const;
  RangeResult range(Key key, Key width) const;

  // Payload of `key` after all operations with sequence number <= seq.
  Payload value_at(Key key, std::uint64_t seq) const;

  std::uint64_t seq() const { return seq_; }
  const LiveMap& live() const { return live_; }
  const std::map<Key, std::vector<Version>>& history() const { return history_; }

 private:
  LiveMap live_;
  std::map<Key, std::vector<Version>> history_;
  std::uint64_t seq_ = 0;
};

}  // namespace lli::verify
