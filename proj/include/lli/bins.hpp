#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lli/core.hpp"

namespace lli {

enum class NodeKind : std::uint8_t { kOneLevelBin, kTwoLevelBin, kModelNode };

const char* to_string(NodeKind kind);

// Anything that can occupy a child slot of a model node.
class Node {
 public:
  explicit Node(NodeKind kind) : kind_(kind) {}
  virtual ~Node() = default;
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  NodeKind kind() const { return kind_; }
  bool is_bin() const { return kind_ != NodeKind::kModelNode; }

 private:
  const NodeKind kind_;
};

struct alignas(8) KNode {
  // Fresh key: owns its version cell.
  KNode(Key k, VersionedValue* first) : item(k), own_cell(first), version(&own_cell) {}
  // Rebucketed key: shares a cell owned elsewhere.
  KNode(Key k, VersionHead* shared) : item(k), version(shared) {}
  ~KNode() {
    if (version == &own_cell) free_chain(own_cell.load());
  }
  KNode(const KNode&) = delete;
  KNode& operator=(const KNode&) = delete;

  const Key item;
  VersionHead own_cell{nullptr};
  VersionHead* const version;
  MarkedLink<KNode> next;
};

enum class BinStatus : std::uint8_t { kDone, kUnderMakeModel };

struct BinOpResult {
  BinStatus status = BinStatus::kDone;
  bool done_value = false;

  static BinOpResult done(bool v) { return {BinStatus::kDone, v}; }
  static BinOpResult under_make_model() { return {BinStatus::kUnderMakeModel, false}; }
  bool operator==(const BinOpResult&) const = default;
};

class Bin : public Node {
 public:
  Bin(NodeKind kind, std::size_t threshold, std::size_t initial_size)
      : Node(kind), threshold_(threshold), size_(initial_size) {}

  bool is_one_level() const { return kind() == NodeKind::kOneLevelBin; }
  std::size_t threshold() const { return threshold_; }
  std::size_t size() const { return size_.load(std::memory_order_relaxed); }
  bool full() const { return size() >= threshold_; }
  void note_new_key() { size_.fetch_add(1, std::memory_order_relaxed); }

 protected:
  const std::size_t threshold_;
  std::atomic<std::size_t> size_;
};

class OneLevelBin final : public Bin {
 public:
  explicit OneLevelBin(std::size_t threshold, std::size_t initial_size = 0)
      : Bin(NodeKind::kOneLevelBin, threshold, initial_size) {}
  ~OneLevelBin() override;

  MarkedLink<KNode> head;

  // Counts KNodes by traversal; exact only when quiescent.
  std::size_t count_nodes() const;

  // Non-concurrent append used while building a bin that is not yet visible.
  void append_unpublished(KNode* node, KNode*& tail);
};

class TwoLevelBin final : public Bin {
 public:
  TwoLevelBin(std::vector<Key> separators, std::vector<std::unique_ptr<OneLevelBin>> children,
              std::size_t threshold, std::size_t initial_size)
      : Bin(NodeKind::kTwoLevelBin, threshold, initial_size),
        separators_(std::move(separators)),
        children_(std::move(children)) {}

  // Child i owns (separators[i-1], separators[i]]; the last child is unbounded.
  std::size_t route(Key key) const;

  std::span<const Key> separators() const { return separators_; }
  std::size_t child_count() const { return children_.size(); }
  OneLevelBin& child(std::size_t i) const { return *children_[i]; }

 private:
  const std::vector<Key> separators_;
  const std::vector<std::unique_ptr<OneLevelBin>> children_;
};

// A single-key one-level bin. Its version is left unstamped; the caller
// assigns the timestamp once the bin is published.
std::unique_ptr<OneLevelBin> bin_new(Key key, Value value, std::size_t threshold);

// The only KNode of a freshly built bin. Take it before publishing the bin.
KNode& bin_first_node(OneLevelBin& bin);

BinOpResult insert_bin(Bin& bin, Key key, Value value, const GlobalClock& clock);
BinOpResult delete_bin(Bin& bin, Key key, const GlobalClock& clock);

// Reads ignore freeze flags.
KNode* search_bin(const Bin& bin, Key key);

// Appends (key, payload) for every key in [lo, hi] whose payload at `ts` is a
// concrete value, in ascending key order. Stops once `budget` pairs are added.
void scan_bin(const Bin& bin, Key lo, Key hi, Timestamp ts, const GlobalClock& clock,
              std::vector<std::pair<Key, Value>>& out, std::size_t& budget);

void freeze_bin(Bin& bin);

struct Collected {
  std::vector<Key> keys;
  std::vector<VersionHead*> versions;
};

// All keys of a frozen bin, ascending, with their shared version cells.
Collected collect_frozen(const Bin& bin, const GlobalClock& clock);

// Children receive ceil(n/F) keys while the remainder lasts, then floor(n/F).
std::vector<std::size_t> balanced_split(std::size_t n, std::size_t fanout);

std::unique_ptr<TwoLevelBin> olb_to_tlb(const Collected& collected, std::size_t fanout,
                                        std::size_t threshold);

}  // namespace lli
