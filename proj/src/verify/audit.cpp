#include "lli/verify/audit.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace lli::verify {

namespace {

struct Interval {
  std::optional<Key> lo;  // exclusive
  std::optional<Key> hi;  // exclusive

  bool contains(Key k) const { return (!lo || k > *lo) && (!hi || k < *hi); }
  std::string str() const {
    return "(" + (lo ? std::to_string(*lo) : "-inf") + ", " + (hi ? std::to_string(*hi) : "+inf") +
           ")";
  }
};

class Auditor {
 public:
  explicit Auditor(const Index& index) : index_(index) {}

  AuditReport run() {
    visit_node(index_.root(), Interval{}, 1);
    for (const auto& [key, count] : visits_) {
      if (count > 1) {
        fail("unique-path", "key " + std::to_string(key) + " stored " + std::to_string(count) +
                                " times");
      }
      if (!reachable(key)) fail("unique-path", "key " + std::to_string(key) + " unreachable by seek");
    }
    report_.keys_visited = visits_.size();
    return std::move(report_);
  }

 private:
  void fail(std::string inv, std::string detail) {
    report_.findings.push_back({std::move(inv), std::move(detail)});
  }

  void visit_key(Key key, const VersionHead& cell, const Interval& iv, const char* where) {
    if (!iv.contains(key)) {
      fail("interval", std::string(where) + " key " + std::to_string(key) + " outside " + iv.str());
    }
    ++visits_[key];
    const VersionedValue* head = cell.load();
    if (head == nullptr) {
      fail("versions", "key " + std::to_string(key) + " has no version");
      return;
    }
    if (head->ts.load() == kUnsetTs) fail("versions", "unstamped head at key " + std::to_string(key));
    Timestamp newer = head->ts.load();
    for (const VersionedValue* v = head->vnext; v != nullptr; v = v->vnext) {
      const Timestamp t = v->ts.load();
      if (t == kUnsetTs) fail("versions", "unstamped older version at key " + std::to_string(key));
      if (newer != kUnsetTs && t > newer) {
        fail("versions", "timestamps increase toward the tail at key " + std::to_string(key));
      }
      newer = t;
    }
    if (head->val) report_.live[key] = *head->val;
  }

  void visit_node(const ModelNode& node, const Interval& iv, std::size_t depth) {
    ++report_.model_nodes;
    report_.max_depth = std::max(report_.max_depth, depth);
    const auto keys = node.keys();
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i > 0 && keys[i] <= keys[i - 1]) fail("sorted", "model node keys not increasing");
      visit_key(keys[i], node.version(i), iv, "model node");
    }
    for (std::size_t j = 0; j <= keys.size(); ++j) {
      Interval child_iv = iv;
      if (j > 0) child_iv.lo = keys[j - 1];
      if (j < keys.size()) child_iv.hi = keys[j];
      const Node* c = node.child(j).load();
      if (c == nullptr) continue;
      if (c->is_bin()) {
        visit_bin(static_cast<const Bin&>(*c), child_iv);
      } else {
        visit_node(static_cast<const ModelNode&>(*c), child_iv, depth + 1);
      }
    }
  }

  std::size_t visit_list(const OneLevelBin& list, const Interval& iv) {
    std::size_t count = 0;
    std::optional<Key> prev;
    for (KNode* n = list.head.load().target; n != nullptr; n = n->next.load().target) {
      if (prev && n->item <= *prev) fail("sorted", "bin list not strictly increasing");
      prev = n->item;
      visit_key(n->item, *n->version, iv, "bin");
      ++count;
    }
    return count;
  }

  void visit_bin(const Bin& bin, const Interval& iv) {
    if (bin.is_one_level()) {
      ++report_.one_level_bins;
      const std::size_t count = visit_list(static_cast<const OneLevelBin&>(bin), iv);
      if (count != bin.size()) {
        fail("size", "one-level bin counter " + std::to_string(bin.size()) + " but " +
                         std::to_string(count) + " keys");
      }
      return;
    }
    ++report_.two_level_bins;
    const auto& tlb = static_cast<const TwoLevelBin&>(bin);
    const auto seps = tlb.separators();
    std::size_t total = 0;
    for (std::size_t i = 0; i < tlb.child_count(); ++i) {
      Interval child_iv = iv;
      if (i > 0) child_iv.lo = seps[i - 1];
      // Child i owns keys <= seps[i]; express as exclusive bound seps[i] + 1.
      if (i < seps.size() && seps[i] < kMaxKey) {
        if (!child_iv.hi || seps[i] + 1 < *child_iv.hi) child_iv.hi = seps[i] + 1;
      }
      const std::size_t count = visit_list(tlb.child(i), child_iv);
      if (count != tlb.child(i).size()) fail("size", "two-level child counter mismatch");
      total += count;
    }
    if (total != bin.size()) {
      fail("size", "two-level bin counter " + std::to_string(bin.size()) + " but " +
                       std::to_string(total) + " keys");
    }
  }

  bool reachable(Key key) const {
    const SeekResult s = index_.seek(key);
    switch (s.status) {
      case SeekStatus::kFound: return s.node->keys()[s.slot] == key;
      case SeekStatus::kNotFound: return false;
      case SeekStatus::kMaybe: return search_bin(*s.bin, key) != nullptr;
    }
    return false;
  }

  const Index& index_;
  AuditReport report_;
  std::map<Key, std::size_t> visits_;
};

}  // namespace

AuditReport audit_structure(const Index& index) { return Auditor(index).run(); }

std::string AuditReport::summary() const {
  std::ostringstream os;
  os << (clean() ? "clean" : "FINDINGS") << ": keys=" << keys_visited << " live=" << live.size()
     << " mnodes=" << model_nodes << " olbs=" << one_level_bins << " tlbs=" << two_level_bins
     << " depth=" << max_depth;
  for (const auto& f : findings) os << "\n  [" << f.invariant << "] " << f.detail;
  return os.str();
}

}  // namespace lli::verify
