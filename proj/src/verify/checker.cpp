#include "lli/verify/checker.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "lli/verify/oracle.hpp"

namespace lli::verify {

namespace {

class Search {
 public:
  Search(std::span<const HistoryEvent> h, LiveMap initial) : h_(h), state_(std::move(initial)) {
    const std::size_t n = h.size();
    before_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && h[j].respond < h[i].invoke) before_[i] |= bit(j);
      }
    }
    all_ = n == 64 ? ~std::uint64_t{0} : bit(n) - 1;
  }

  bool run() { return dfs(0); }

  std::vector<std::size_t> order;
  std::vector<std::size_t> best;
  std::vector<std::size_t> best_blocked;
  std::size_t explored = 0;

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

  std::string memo_key(std::uint64_t mask) const {
    std::string k(reinterpret_cast<const char*>(&mask), sizeof mask);
    for (const auto& [key, value] : state_) {
      k.append(reinterpret_cast<const char*>(&key), sizeof key);
      k.append(reinterpret_cast<const char*>(&value), sizeof value);
    }
    return k;
  }

  bool dfs(std::uint64_t mask) {
    if (mask == all_) return true;
    if (!seen_.insert(memo_key(mask)).second) return false;
    ++explored;
    std::vector<std::size_t> blocked;
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if ((mask & bit(i)) || (before_[i] & ~mask)) continue;
      LiveMap saved = state_;
      const OpResult expect = oracle_apply(state_, h_[i].op);
      if (same_result(h_[i].op.kind, expect, h_[i].result)) {
        order.push_back(i);
        if (dfs(mask | bit(i))) return true;
        order.pop_back();
      } else {
        blocked.push_back(i);
      }
      state_ = std::move(saved);
    }
    if (order.size() > best.size() || best.empty()) {
      best = order;
      best_blocked = blocked;
    }
    return false;
  }

  std::span<const HistoryEvent> h_;
  LiveMap state_;
  std::vector<std::uint64_t> before_;
  std::uint64_t all_ = 0;
  std::unordered_set<std::string> seen_;
};

}  // namespace

LinearizabilityVerdict check_linearizable(std::span<const HistoryEvent> history,
                                          std::span<const std::pair<Key, Value>> initial) {
  if (history.size() > 64) throw std::invalid_argument("history longer than 64 events");
  Search s(history, LiveMap(initial.begin(), initial.end()));
  LinearizabilityVerdict v;
  v.linearizable = s.run();
  v.states_explored = s.explored;
  if (v.linearizable) {
    v.witness = std::move(s.order);
  } else {
    v.failing_prefix = std::move(s.best);
    v.blocked = std::move(s.best_blocked);
  }
  return v;
}

std::string LinearizabilityVerdict::describe(std::span<const HistoryEvent> history) const {
  std::ostringstream os;
  if (linearizable) {
    os << "linearizable; witness order:\n";
    for (std::size_t i : witness) os << "  " << format_event(history[i]) << '\n';
    return os.str();
  }
  os << "NOT linearizable; longest legal prefix (" << failing_prefix.size() << " of "
     << history.size() << " events):\n";
  for (std::size_t i : failing_prefix) os << "  " << format_event(history[i]) << '\n';
  os << "no eligible event can follow it; mismatching candidates:\n";
  for (std::size_t i : blocked) os << "  " << format_event(history[i]) << '\n';
  return os.str();
}

}  // namespace lli::verify
