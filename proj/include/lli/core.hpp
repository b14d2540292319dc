#pragma once

#include <atomic>
#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>

#include "lli/instrument.hpp"

namespace lli {

using Key = std::uint64_t;
using Value = std::uint64_t;
// std::nullopt is the deletion marker; it is never a legal insert value.
using Payload = std::optional<Value>;
using Timestamp = std::int64_t;

inline constexpr Timestamp kUnsetTs = -1;
inline constexpr Key kMaxKey = std::numeric_limits<Key>::max();

class GlobalClock {
 public:
  Timestamp read() const {
    instrument::step(&now_);
    return now_.load(std::memory_order_seq_cst);
  }

  // Reads the clock and tries once to advance it by one. A failed CAS means
  // another caller already advanced it past the returned value.
  Timestamp read_and_bump() {
    const Timestamp t = read();
    Timestamp expected = t;
    instrument::step(&now_);
    bool ok = now_.compare_exchange_strong(expected, t + 1, std::memory_order_seq_cst);
    instrument::cas_outcome(&now_, ok);
    return t;
  }

 private:
  std::atomic<Timestamp> now_{0};
};

// One version of a key's payload. `vnext` is written before the version is
// published and never afterwards; `ts` is write-once after leaving kUnsetTs.
struct VersionedValue {
  VersionedValue(Payload v, VersionedValue* older, Timestamp t = kUnsetTs)
      : val(v), ts(t), vnext(older) {}

  const Payload val;
  std::atomic<Timestamp> ts;
  VersionedValue* vnext;
};

// A key's atomic version-head cell. Several structures may point at the same
// cell after a bin is transformed; only the creator owns the chain.
using VersionHead = std::atomic<VersionedValue*>;

void init_ts(VersionedValue& v, const GlobalClock& clock);

Payload read_value_latest(VersionHead& head, const GlobalClock& clock);

// Returns false without mutating when the latest payload already equals
// `new_val`; otherwise pushes a new version and returns true.
bool write_value(VersionHead& head, Payload new_val, const GlobalClock& clock);

// Deletes a whole chain. Only called at teardown by the owner of the cell.
void free_chain(VersionedValue* v);

enum class ReadKind : std::uint8_t { kValue, kDeleted, kTombstone };

// Result of reading a key's payload as of a timestamp.
struct VersionedRead {
  ReadKind kind = ReadKind::kTombstone;
  Value value = 0;

  static VersionedRead of(Value v) { return {ReadKind::kValue, v}; }
  static VersionedRead deleted() { return {ReadKind::kDeleted, 0}; }
  static VersionedRead tombstone() { return {ReadKind::kTombstone, 0}; }

  bool operator==(const VersionedRead&) const = default;
};

VersionedRead read_value_at(VersionHead& head, Timestamp ts, const GlobalClock& clock);

// A link whose target and freeze flag are read and CASed as one word; the flag
// lives in the low bit of the (at least 2-byte aligned) target address.
template <class T>
class MarkedLink {
 public:
  struct Snapshot {
    T* target = nullptr;
    bool frozen = false;
    bool operator==(const Snapshot&) const = default;
  };

  MarkedLink() = default;
  explicit MarkedLink(T* target) : word_(pack({target, false})) {}

  Snapshot load() const {
    instrument::step(&word_);
    return unpack(word_.load(std::memory_order_seq_cst));
  }

  bool compare_and_swap(Snapshot expected, Snapshot desired) {
    std::uintptr_t e = pack(expected);
    instrument::step(&word_);
    bool ok = word_.compare_exchange_strong(e, pack(desired), std::memory_order_seq_cst);
    instrument::cas_outcome(&word_, ok);
    return ok;
  }

  // Pre-publication initialization only.
  void reset(T* target) { word_.store(pack({target, false}), std::memory_order_relaxed); }

  const void* address() const { return &word_; }

 private:
  static std::uintptr_t pack(Snapshot s) {
    static_assert(alignof(T) >= 2);
    return reinterpret_cast<std::uintptr_t>(s.target) | (s.frozen ? 1u : 0u);
  }
  static Snapshot unpack(std::uintptr_t w) {
    return {reinterpret_cast<T*>(w & ~std::uintptr_t{1}), (w & 1u) != 0};
  }

  std::atomic<std::uintptr_t> word_{0};
};

}  // namespace lli
