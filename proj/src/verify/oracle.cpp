#include "lli/verify/oracle.hpp"

#include "lli/range.hpp"

namespace lli::verify {

OpResult oracle_apply(LiveMap& live, const Operation& op) {
  OpResult r;
  switch (op.kind) {
    case OpKind::kInsert: {
      auto [it, fresh] = live.try_emplace(op.key, op.arg);
      if (fresh) {
        r.flag = true;
      } else if (it->second != op.arg) {
        it->second = op.arg;
        r.flag = true;
      }
      break;
    }
    case OpKind::kDelete:
      r.flag = live.erase(op.key) == 1;
      break;
    case OpKind::kSearch:
      if (auto it = live.find(op.key); it != live.end()) r.payload = it->second;
      break;
    case OpKind::kRange: {
      const Key hi = saturating_end(op.key, op.arg);
      for (auto it = live.lower_bound(op.key); it != live.end() && it->first <= hi; ++it) {
        r.pairs.emplace_back(it->first, it->second);
      }
      break;
    }
  }
  return r;
}

Oracle::Oracle(std::span<const std::pair<Key, Value>> initial) {
  for (const auto& [k, v] : initial) {
    live_[k] = v;
    history_[k].push_back({v, 0});
  }
}

OpResult Oracle::apply(const Operation& op) {
  OpResult r = oracle_apply(live_, op);
  if ((op.kind == OpKind::kInsert || op.kind == OpKind::kDelete) && r.flag) {
    ++seq_;
    const Payload p = op.kind == OpKind::kInsert ? Payload(op.arg) : std::nullopt;
    history_[op.key].push_back({p, seq_});
  }
  return r;
}

Payload Oracle::search(Key key) const {
  auto it = live_.find(key);
  return it == live_.end() ? std::nullopt : Payload(it->second);
}

RangeResult Oracle::range(Key key, Key width) const {
  RangeResult out;
  const Key hi = saturating_end(key, width);
  for (auto it = live_.lower_bound(key); it != live_.end() && it->first <= hi; ++it) {
    out.emplace_back(it->first, it->second);
  }
  return out;
}

Payload Oracle::value_at(Key key, std::uint64_t seq) const {
  auto it = history_.find(key);
  if (it == history_.end()) return std::nullopt;
  Payload p;
  for (const Version& v : it->second) {
    if (v.seq > seq) break;
    p = v.payload;
  }
  return p;
}

}  // namespace lli::verify
