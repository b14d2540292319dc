#include "lli/core.hpp"

namespace lli {

void init_ts(VersionedValue& v, const GlobalClock& clock) {
  instrument::step(&v.ts);
  if (v.ts.load(std::memory_order_seq_cst) != kUnsetTs) return;
  Timestamp now = clock.read();
  Timestamp expected = kUnsetTs;
  instrument::step(&v.ts);
  bool ok = v.ts.compare_exchange_strong(expected, now, std::memory_order_seq_cst);
  instrument::cas_outcome(&v.ts, ok);
}

Payload read_value_latest(VersionHead& head, const GlobalClock& clock) {
  instrument::step(&head);
  VersionedValue* v = head.load(std::memory_order_seq_cst);
  assert(v != nullptr);
  init_ts(*v, clock);
  return v->val;
}

bool write_value(VersionHead& head, Payload new_val, const GlobalClock& clock) {
  VersionedValue* fresh = nullptr;
  for (;;) {
    instrument::step(&head);
    VersionedValue* cur = head.load(std::memory_order_seq_cst);
    init_ts(*cur, clock);
    if (cur->val == new_val) {
      delete fresh;
      return false;
    }
    if (fresh == nullptr) fresh = new VersionedValue(new_val, cur);
    fresh->vnext = cur;
    instrument::step(&head);
    bool ok = head.compare_exchange_strong(cur, fresh, std::memory_order_seq_cst);
    instrument::cas_outcome(&head, ok);
    if (ok) {
      init_ts(*fresh, clock);
      return true;
    }
  }
}

void free_chain(VersionedValue* v) {
  while (v != nullptr) {
    VersionedValue* next = v->vnext;
    delete v;
    v = next;
  }
}

VersionedRead read_value_at(VersionHead& head, Timestamp ts, const GlobalClock& clock) {
  instrument::step(&head);
  VersionedValue* v = head.load(std::memory_order_seq_cst);
  if (v == nullptr) return VersionedRead::tombstone();
  init_ts(*v, clock);
  while (v != nullptr && v->ts.load(std::memory_order_seq_cst) > ts) {
    v = v->vnext;
    // Every non-head version was fenced by the write that displaced it.
    assert(v == nullptr || v->ts.load(std::memory_order_relaxed) != kUnsetTs);
  }
  if (v == nullptr) return VersionedRead::tombstone();
  if (!v->val) return VersionedRead::deleted();
  return VersionedRead::of(*v->val);
}

}  // namespace lli
