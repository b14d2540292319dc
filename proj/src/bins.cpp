#include "lli/bins.hpp"

#include <algorithm>
#include <limits>

namespace lli {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kOneLevelBin: return "olb";
    case NodeKind::kTwoLevelBin: return "tlb";
    case NodeKind::kModelNode: return "mnode";
  }
  return "?";
}

OneLevelBin::~OneLevelBin() {
  KNode* n = head.load().target;
  while (n != nullptr) {
    KNode* next = n->next.load().target;
    delete n;
    n = next;
  }
}

std::size_t OneLevelBin::count_nodes() const {
  std::size_t c = 0;
  for (KNode* n = head.load().target; n != nullptr; n = n->next.load().target) ++c;
  return c;
}

void OneLevelBin::append_unpublished(KNode* node, KNode*& tail) {
  if (tail == nullptr) {
    head.reset(node);
  } else {
    tail->next.reset(node);
  }
  tail = node;
}

std::size_t TwoLevelBin::route(Key key) const {
  return static_cast<std::size_t>(
      std::lower_bound(separators_.begin(), separators_.end(), key) - separators_.begin());
}

std::unique_ptr<OneLevelBin> bin_new(Key key, Value value, std::size_t threshold) {
  auto bin = std::make_unique<OneLevelBin>(threshold, 1);
  KNode* tail = nullptr;
  bin->append_unpublished(new KNode(key, new VersionedValue(value, nullptr)), tail);
  return bin;
}

KNode& bin_first_node(OneLevelBin& bin) { return *bin.head.load().target; }

namespace {

struct ListLookup {
  bool frozen = false;
  KNode* match = nullptr;
};

// Walks the list to `key`, reporting a freeze flag on any traversed link.
ListLookup find_for_update(OneLevelBin& list, Key key) {
  auto cur = list.head.load();
  for (;;) {
    if (cur.frozen) return {true, nullptr};
    if (cur.target == nullptr || cur.target->item > key) return {};
    if (cur.target->item == key) return {false, cur.target};
    cur = cur.target->next.load();
  }
}

OneLevelBin& owning_list(Bin& bin, Key key) {
  if (bin.is_one_level()) return static_cast<OneLevelBin&>(bin);
  auto& tlb = static_cast<TwoLevelBin&>(bin);
  return tlb.child(tlb.route(key));
}

const OneLevelBin& owning_list(const Bin& bin, Key key) {
  return owning_list(const_cast<Bin&>(bin), key);
}

}  // namespace

BinOpResult insert_bin(Bin& bin, Key key, Value value, const GlobalClock& clock) {
  OneLevelBin& list = owning_list(bin, key);
  KNode* fresh = nullptr;
  MarkedLink<KNode>* pred = &list.head;
  auto cur = pred->load();
  for (;;) {
    if (cur.frozen) {
      delete fresh;
      return BinOpResult::under_make_model();
    }
    if (cur.target != nullptr && cur.target->item < key) {
      pred = &cur.target->next;
      cur = pred->load();
      continue;
    }
    if (cur.target != nullptr && cur.target->item == key) {
      delete fresh;
      return BinOpResult::done(write_value(*cur.target->version, value, clock));
    }
    if (fresh == nullptr) fresh = new KNode(key, new VersionedValue(value, nullptr));
    fresh->next.reset(cur.target);
    if (pred->compare_and_swap({cur.target, false}, {fresh, false})) {
      init_ts(*fresh->own_cell.load(), clock);
      list.note_new_key();
      if (&list != &bin) bin.note_new_key();
      return BinOpResult::done(true);
    }
    // The predecessor is never unlinked, so retry from it.
    cur = pred->load();
  }
}

BinOpResult delete_bin(Bin& bin, Key key, const GlobalClock& clock) {
  const ListLookup found = find_for_update(owning_list(bin, key), key);
  if (found.frozen) return BinOpResult::under_make_model();
  if (found.match == nullptr) return BinOpResult::done(false);
  if (!read_value_latest(*found.match->version, clock)) return BinOpResult::done(false);
  return BinOpResult::done(write_value(*found.match->version, std::nullopt, clock));
}

KNode* search_bin(const Bin& bin, Key key) {
  const OneLevelBin& list = owning_list(bin, key);
  for (KNode* n = list.head.load().target; n != nullptr; n = n->next.load().target) {
    if (n->item == key) return n;
    if (n->item > key) break;
  }
  return nullptr;
}

namespace {

void scan_list(const OneLevelBin& list, Key lo, Key hi, Timestamp ts, const GlobalClock& clock,
               std::vector<std::pair<Key, Value>>& out, std::size_t& budget) {
  for (KNode* n = list.head.load().target; n != nullptr && budget > 0;
       n = n->next.load().target) {
    if (n->item > hi) break;
    if (n->item < lo) continue;
    const VersionedRead r = read_value_at(*n->version, ts, clock);
    if (r.kind == ReadKind::kValue) {
      out.emplace_back(n->item, r.value);
      --budget;
    }
  }
}

void freeze_list(OneLevelBin& list) {
  MarkedLink<KNode>* link = &list.head;
  for (;;) {
    auto cur = link->load();
    while (!cur.frozen) {
      if (link->compare_and_swap(cur, {cur.target, true})) break;
      cur = link->load();
    }
    if (cur.target == nullptr) return;
    link = &cur.target->next;
  }
}

void collect_list(const OneLevelBin& list, const GlobalClock& clock, Collected& out) {
  for (KNode* n = list.head.load().target; n != nullptr; n = n->next.load().target) {
    VersionHead* cell = n->version;
    init_ts(*cell->load(), clock);
    out.keys.push_back(n->item);
    out.versions.push_back(cell);
  }
}

}  // namespace

void scan_bin(const Bin& bin, Key lo, Key hi, Timestamp ts, const GlobalClock& clock,
              std::vector<std::pair<Key, Value>>& out, std::size_t& budget) {
  if (bin.is_one_level()) {
    scan_list(static_cast<const OneLevelBin&>(bin), lo, hi, ts, clock, out, budget);
    return;
  }
  const auto& tlb = static_cast<const TwoLevelBin&>(bin);
  for (std::size_t i = tlb.route(lo); i < tlb.child_count() && budget > 0; ++i) {
    scan_list(tlb.child(i), lo, hi, ts, clock, out, budget);
    if (i < tlb.separators().size() && tlb.separators()[i] >= hi) break;
  }
}

void freeze_bin(Bin& bin) {
  if (bin.is_one_level()) {
    freeze_list(static_cast<OneLevelBin&>(bin));
    return;
  }
  auto& tlb = static_cast<TwoLevelBin&>(bin);
  for (std::size_t i = 0; i < tlb.child_count(); ++i) freeze_list(tlb.child(i));
}

Collected collect_frozen(const Bin& bin, const GlobalClock& clock) {
  Collected out;
  out.keys.reserve(bin.size());
  out.versions.reserve(bin.size());
  if (bin.is_one_level()) {
    collect_list(static_cast<const OneLevelBin&>(bin), clock, out);
  } else {
    const auto& tlb = static_cast<const TwoLevelBin&>(bin);
    for (std::size_t i = 0; i < tlb.child_count(); ++i) collect_list(tlb.child(i), clock, out);
  }
  return out;
}

std::vector<std::size_t> balanced_split(std::size_t n, std::size_t fanout) {
  assert(fanout > 0);
  // Never create empty children; their separators would be undefined.
  const std::size_t parts = std::max<std::size_t>(1, std::min(fanout, n));
  std::vector<std::size_t> sizes(parts, n / parts);
  for (std::size_t i = 0; i < n % parts; ++i) ++sizes[i];
  return sizes;
}

std::unique_ptr<TwoLevelBin> olb_to_tlb(const Collected& collected, std::size_t fanout,
                                        std::size_t threshold) {
  const std::size_t n = collected.keys.size();
  const auto sizes = balanced_split(n, fanout);
  std::vector<Key> separators;
  std::vector<std::unique_ptr<OneLevelBin>> children;
  std::size_t at = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    auto child = std::make_unique<OneLevelBin>(std::numeric_limits<std::size_t>::max(), sizes[c]);
    KNode* tail = nullptr;
    for (std::size_t j = 0; j < sizes[c]; ++j, ++at) {
      child->append_unpublished(new KNode(collected.keys[at], collected.versions[at]), tail);
    }
    if (c + 1 < sizes.size()) separators.push_back(collected.keys[at - 1]);
    children.push_back(std::move(child));
  }
  return std::make_unique<TwoLevelBin>(std::move(separators), std::move(children), threshold, n);
}

}  // namespace lli
