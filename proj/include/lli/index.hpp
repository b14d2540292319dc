#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lli/bins.hpp"
#include "lli/core.hpp"
#include "lli/models.hpp"

namespace lli {

using RangeResult = std::vector<std::pair<Key, Value>>;

// A model node: immutable sorted keys routed by a model, one version cell per
// key, and m+1 child slots. Child j covers the open interval
// (keys[j-1], keys[j]); slot contents only advance empty -> OLB -> TLB -> node.
class ModelNode final : public Node {
 public:
  // The root owns its version cells and routes through piecewise segments.
  static std::unique_ptr<ModelNode> make_root(std::span<const std::pair<Key, Value>> pairs,
                                              double eps_target);

  // A retrained node shares the version cells of the bin it replaces.
  ModelNode(std::vector<Key> keys, std::vector<VersionHead*> versions, Model model);

  ~ModelNode() override;

  bool is_root() const { return root_; }
  std::size_t size() const { return keys_.size(); }
  std::span<const Key> keys() const { return keys_; }
  std::span<const Segment> segments() const { return segments_; }
  const Model& model() const { return model_; }

  VersionHead& version(std::size_t i) const { return *versions_[i]; }
  std::atomic<Node*>& child(std::size_t slot) const { return children_[slot]; }

  NodeSearch locate(Key key) const;

 private:
  ModelNode() : Node(NodeKind::kModelNode) {}

  bool root_ = false;
  std::vector<Key> keys_;
  std::vector<Segment> segments_;
  Model model_;
  std::unique_ptr<VersionHead[]> owned_cells_;
  std::vector<VersionHead*> versions_;
  std::unique_ptr<std::atomic<Node*>[]> children_;
};

enum class SeekStatus : std::uint8_t { kFound, kNotFound, kMaybe };

struct SeekResult {
  ModelNode* node = nullptr;
  // Key index for kFound, child-slot index otherwise.
  std::size_t slot = 0;
  SeekStatus status = SeekStatus::kNotFound;
  // The bin observed in the slot for kMaybe.
  Bin* bin = nullptr;
};

struct IndexConfig {
  double root_eps = 32.0;
  std::size_t olb_threshold = 64;
  std::size_t tlb_threshold = 1024;
  std::size_t fanout = 8;
  // Debug hook invoked after each successful slot replacement;
  // `from` is empty for a slot that held nothing.
  std::function<void(std::optional<NodeKind> from, NodeKind to)> on_transition;
};

class Index {
 public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  // `pairs` must be sorted by strictly increasing key.
  explicit Index(std::span<const std::pair<Key, Value>> pairs, IndexConfig config = {});
  Index(std::initializer_list<std::pair<Key, Value>> pairs, IndexConfig config = {})
      : Index(std::span<const std::pair<Key, Value>>(pairs.begin(), pairs.size()), config) {}
  ~Index();
  Index(const Index&) = delete;
  Index& operator=(const Index&) = delete;

  // False iff the key is present with the same value.
  bool insert(Key key, Value value);
  // False iff the key is absent or already deleted.
  bool remove(Key key);
  Payload search(Key key) const;
  // Every live pair with key in [key, key + width] (saturating), as of one
  // clock read. `max_results` optionally caps the result length; `scan_ts`
  // receives the timestamp the scan read at.
  RangeResult range(Key key, Key width, std::size_t max_results = kUnlimited,
                    Timestamp* scan_ts = nullptr);

  SeekResult seek(Key key) const;

  // Freezes `bin`, builds its replacement and attempts one CAS on the slot.
  void help_make_model(ModelNode& parent, std::size_t slot, Bin& bin);

  const ModelNode& root() const { return *root_; }
  const GlobalClock& clock() const { return clock_; }
  GlobalClock& clock() { return clock_; }
  const IndexConfig& config() const { return config_; }
  std::size_t retired_count() const { return retired_count_.load(); }

 private:
  void retire(Node* node);
  void notify(std::optional<NodeKind> from, NodeKind to) const;

  struct Retired {
    Node* node;
    Retired* next;
  };

  IndexConfig config_;
  GlobalClock clock_;
  std::unique_ptr<ModelNode> root_;
  // Replaced nodes stay readable by in-flight operations until teardown.
  std::atomic<Retired*> retired_{nullptr};
  std::atomic<std::size_t> retired_count_{0};
};

}  // namespace lli
