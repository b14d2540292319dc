#include "lli/index.hpp"

#include <stdexcept>

#include "lli/range.hpp"

namespace lli {

std::unique_ptr<ModelNode> ModelNode::make_root(std::span<const std::pair<Key, Value>> pairs,
                                                double eps_target) {
  std::unique_ptr<ModelNode> node(new ModelNode());
  node->root_ = true;
  const std::size_t m = pairs.size();
  node->keys_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0 && pairs[i].first <= pairs[i - 1].first) {
      throw std::invalid_argument("root keys must be strictly increasing");
    }
    node->keys_.push_back(pairs[i].first);
  }
  node->segments_ = segment_root(node->keys_, eps_target);
  node->owned_cells_ = std::make_unique<VersionHead[]>(m);
  node->versions_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    node->owned_cells_[i].store(new VersionedValue(pairs[i].second, nullptr, 0));
    node->versions_.push_back(&node->owned_cells_[i]);
  }
  node->children_ = std::make_unique<std::atomic<Node*>[]>(m + 1);
  return node;
}

ModelNode::ModelNode(std::vector<Key> keys, std::vector<VersionHead*> versions, Model model)
    : Node(NodeKind::kModelNode),
      keys_(std::move(keys)),
      model_(model),
      versions_(std::move(versions)),
      children_(std::make_unique<std::atomic<Node*>[]>(keys_.size() + 1)) {
  assert(keys_.size() == versions_.size());
}

ModelNode::~ModelNode() {
  if (children_) {
    for (std::size_t j = 0; j <= keys_.size(); ++j) delete children_[j].load();
  }
  if (owned_cells_) {
    for (std::size_t i = 0; i < keys_.size(); ++i) free_chain(owned_cells_[i].load());
  }
}

NodeSearch ModelNode::locate(Key key) const {
  if (root_) return search_segmented(keys_, segments_, key);
  return search_exponential(keys_, model_, key);
}

Index::Index(std::span<const std::pair<Key, Value>> pairs, IndexConfig config)
    : config_(std::move(config)), root_(ModelNode::make_root(pairs, config_.root_eps)) {}

Index::~Index() {
  root_.reset();
  Retired* r = retired_.load();
  while (r != nullptr) {
    Retired* next = r->next;
    delete r->node;
    delete r;
    r = next;
  }
}

void Index::retire(Node* node) {
  auto* rec = new Retired{node, retired_.load()};
  while (!retired_.compare_exchange_weak(rec->next, rec)) {
  }
  retired_count_.fetch_add(1);
}

void Index::notify(std::optional<NodeKind> from, NodeKind to) const {
  if (config_.on_transition) config_.on_transition(from, to);
}

SeekResult Index::seek(Key key) const {
  ModelNode* node = root_.get();
  for (;;) {
    const NodeSearch r = node->locate(key);
    if (r.found) return {node, static_cast<std::size_t>(r.ix), SeekStatus::kFound, nullptr};
    const auto slot = static_cast<std::size_t>(r.ix + 1);
    instrument::step(&node->child(slot));
    Node* child = node->child(slot).load(std::memory_order_seq_cst);
    if (child == nullptr) return {node, slot, SeekStatus::kNotFound, nullptr};
    if (child->is_bin()) return {node, slot, SeekStatus::kMaybe, static_cast<Bin*>(child)};
    node = static_cast<ModelNode*>(child);
  }
}

bool Index::insert(Key key, Value value) {
  for (;;) {
    const SeekResult s = seek(key);
    switch (s.status) {
      case SeekStatus::kFound:
        return write_value(s.node->version(s.slot), value, clock_);
      case SeekStatus::kNotFound: {
        auto fresh = bin_new(key, value, config_.olb_threshold);
        // Captured before publication: other inserts may splice ahead of it.
        KNode& first = bin_first_node(*fresh);
        Node* expected = nullptr;
        auto& slot = s.node->child(s.slot);
        instrument::step(&slot);
        const bool ok = slot.compare_exchange_strong(expected, fresh.get());
        instrument::cas_outcome(&slot, ok);
        if (!ok) continue;
        fresh.release();
        init_ts(*first.own_cell.load(), clock_);
        notify(std::nullopt, NodeKind::kOneLevelBin);
        return true;
      }
      case SeekStatus::kMaybe: {
        if (s.bin->full()) {
          help_make_model(*s.node, s.slot, *s.bin);
          continue;
        }
        const BinOpResult r = insert_bin(*s.bin, key, value, clock_);
        if (r.status == BinStatus::kUnderMakeModel) {
          help_make_model(*s.node, s.slot, *s.bin);
          continue;
        }
        return r.done_value;
      }
    }
  }
}

bool Index::remove(Key key) {
  for (;;) {
    const SeekResult s = seek(key);
    switch (s.status) {
      case SeekStatus::kFound: {
        VersionHead& head = s.node->version(s.slot);
        if (!read_value_latest(head, clock_)) return false;
        return write_value(head, std::nullopt, clock_);
      }
      case SeekStatus::kNotFound:
        return false;
      case SeekStatus::kMaybe: {
        const BinOpResult r = delete_bin(*s.bin, key, clock_);
        if (r.status == BinStatus::kUnderMakeModel) {
          help_make_model(*s.node, s.slot, *s.bin);
          continue;
        }
        return r.done_value;
      }
    }
  }
}

Payload Index::search(Key key) const {
  const SeekResult s = seek(key);
  switch (s.status) {
    case SeekStatus::kFound:
      return read_value_latest(s.node->version(s.slot), clock_);
    case SeekStatus::kNotFound:
      return std::nullopt;
    case SeekStatus::kMaybe:
      if (KNode* n = search_bin(*s.bin, key)) return read_value_latest(*n->version, clock_);
      return std::nullopt;
  }
  return std::nullopt;
}

void Index::help_make_model(ModelNode& parent, std::size_t slot, Bin& bin) {
  freeze_bin(bin);
  Collected collected = collect_frozen(bin, clock_);
  std::unique_ptr<Node> replacement;
  if (bin.is_one_level()) {
    replacement = olb_to_tlb(collected, config_.fanout, config_.tlb_threshold);
  } else {
    // Each helper fits privately; the slot CAS below publishes exactly one.
    Model model = fit_coefficients(collected.keys);
    replacement = std::make_unique<ModelNode>(std::move(collected.keys),
                                              std::move(collected.versions), model);
  }
  Node* expected = &bin;
  auto& cell = parent.child(slot);
  instrument::step(&cell);
  const bool ok = cell.compare_exchange_strong(expected, replacement.get());
  instrument::cas_outcome(&cell, ok);
  if (!ok) return;
  const NodeKind to = replacement.release()->kind();
  retire(&bin);
  notify(bin.kind(), to);
}

RangeResult Index::range(Key key, Key width, std::size_t max_results, Timestamp* scan_ts) {
  const Key hi = saturating_end(key, width);
  const Timestamp ts = clock_.read_and_bump();
  if (scan_ts != nullptr) *scan_ts = ts;
  RangeResult out;
  std::size_t budget = max_results;
  if (budget > 0) scan(*root_, key, hi, ts, clock_, out, budget);
  return out;
}

void scan(const ModelNode& node, Key lo, Key hi, Timestamp ts, const GlobalClock& clock,
          RangeResult& out, std::size_t& budget) {
  const NodeSearch r = node.locate(lo);
  const std::size_t m = node.size();
  // When lo is itself a key, the child before it holds only smaller keys.
  std::size_t j = r.found ? static_cast<std::size_t>(r.ix) : static_cast<std::size_t>(r.ix + 1);
  bool skip_child = r.found;
  for (; budget > 0; ++j) {
    if (!skip_child) {
      instrument::step(&node.child(j));
      const Node* c = node.child(j).load(std::memory_order_seq_cst);
      if (c != nullptr) {
        if (c->is_bin()) {
          scan_bin(static_cast<const Bin&>(*c), lo, hi, ts, clock, out, budget);
        } else {
          scan(static_cast<const ModelNode&>(*c), lo, hi, ts, clock, out, budget);
        }
      }
    }
    skip_child = false;
    if (j == m || budget == 0 || node.keys()[j] > hi) break;
    const VersionedRead v = read_value_at(node.version(j), ts, clock);
    if (v.kind == ReadKind::kValue) {
      out.emplace_back(node.keys()[j], v.value);
      --budget;
    }
  }
}

}  // namespace lli
