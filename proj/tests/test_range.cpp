#include <doctest.h>

#include <atomic>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "lli/index.hpp"
#include "lli/range.hpp"
#include "lli/verify/oracle.hpp"
#include "lli/verify/recorder.hpp"
#include "lli/verify/scheduler.hpp"

using namespace lli;

namespace {

std::vector<std::pair<Key, Value>> identity(Key from, Key to, Key step = 1) {
  std::vector<std::pair<Key, Value>> out;
  for (Key k = from; k <= to; k += step) out.emplace_back(k, k);
  return out;
}

RangeResult scan_at(const Index& index, Key lo, Key hi, Timestamp ts) {
  RangeResult out;
  std::size_t budget = Index::kUnlimited;
  scan(index.root(), lo, hi, ts, index.clock(), out, budget);
  return out;
}

}  // namespace

TEST_SUITE("range") {
  TEST_CASE("interval semantics") {
    Index index(identity(1, 10));
    CHECK(index.range(3, 4) == RangeResult{{3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}});
    CHECK(index.range(3, 0) == RangeResult{{3, 3}});
    CHECK(index.range(11, 100).empty());
    CHECK(index.range(0, 0).empty());
    CHECK(index.range(0, kMaxKey) == RangeResult(identity(1, 10)));
    CHECK(index.range(2, 100, 3) == RangeResult{{2, 2}, {3, 3}, {4, 4}});
    CHECK(index.range(2, 100, 0).empty());
  }

  TEST_CASE("saturating upper end") {
    CHECK(saturating_end(5, 10) == 15);
    CHECK(saturating_end(kMaxKey - 1, 10) == kMaxKey);
    CHECK(saturating_end(kMaxKey, kMaxKey) == kMaxKey);
    Index index({{kMaxKey - 1, 1}, {kMaxKey, 2}});
    CHECK(index.range(kMaxKey - 5, 100) == RangeResult{{kMaxKey - 1, 1}, {kMaxKey, 2}});
  }

  TEST_CASE("in-order walk across keys and children") {
    Index index({{10, 1}, {20, 2}});
    REQUIRE(index.insert(15, 3));
    REQUIRE(index.insert(5, 4));
    REQUIRE(index.insert(25, 5));
    CHECK(index.range(10, 10) == RangeResult{{10, 1}, {15, 3}, {20, 2}});
    CHECK(index.range(0, 100) == RangeResult{{5, 4}, {10, 1}, {15, 3}, {20, 2}, {25, 5}});
    CHECK(index.range(11, 8) == RangeResult{{15, 3}});
    REQUIRE(index.remove(15));
    CHECK(index.range(10, 10) == RangeResult{{10, 1}, {20, 2}});
  }

  TEST_CASE("an interval inside one child matches scanning that child") {
    Index index(identity(0, 1000, 1000), verify::tiny_index_config());
    for (Key k = 1; k < 1000; k += 3) REQUIRE(index.insert(k, k * 2));
    const Node* child = index.root().child(1).load();
    REQUIRE(child != nullptr);
    RangeResult alone;
    std::size_t budget = Index::kUnlimited;
    const Timestamp ts = index.clock().read();
    if (child->is_bin()) {
      scan_bin(static_cast<const Bin&>(*child), 100, 400, ts, index.clock(), alone, budget);
    } else {
      scan(static_cast<const ModelNode&>(*child), 100, 400, ts, index.clock(), alone, budget);
    }
    CHECK(index.range(100, 300) == alone);
    CHECK(alone.size() == 101);
  }

  TEST_CASE("historical snapshots match the oracle's version history") {
    for (IndexConfig config : {IndexConfig{}, verify::tiny_index_config()}) {
      const auto initial = identity(0, 3000, 100);
      Index index(initial, config);
      verify::Oracle oracle(initial);
      std::mt19937_64 rng(8);
      struct Snap {
        Timestamp ts;
        std::uint64_t seq;
        Key lo, hi;
        RangeResult live;
      };
      std::vector<Snap> snaps;
      for (int i = 0; i < 30'000; ++i) {
        const Key k = rng() % 3000;
        const int roll = static_cast<int>(rng() % 10);
        if (roll < 5) {
          const Value v = 1 + rng() % 5;
          REQUIRE(index.insert(k, v) == oracle.insert(k, v));
        } else if (roll < 8) {
          REQUIRE(index.remove(k) == oracle.remove(k));
        } else {
          const Key w = rng() % 200;
          Timestamp ts = -1;
          const RangeResult got = index.range(k, w, Index::kUnlimited, &ts);
          REQUIRE(got == oracle.range(k, w));
          if (i % 5 == 0) snaps.push_back({ts, oracle.seq(), k, k + w, got});
        }
      }
      REQUIRE(snaps.size() > 100);
      for (const Snap& s : snaps) {
        RangeResult want;
        for (Key k = s.lo; k <= s.hi; ++k) {
          if (const Payload p = oracle.value_at(k, s.seq)) want.emplace_back(k, *p);
        }
        CHECK(want == s.live);
        CHECK(scan_at(index, s.lo, s.hi, s.ts) == want);
        CHECK(scan_at(index, s.lo, s.hi, s.ts) == scan_at(index, s.lo, s.hi, s.ts));
      }
    }
  }

  TEST_CASE("a concurrent writer's values are never newer than the scan") {
    Index index(identity(0, 64, 8), verify::tiny_index_config());
    std::atomic<bool> stop{false};
    std::thread writer([&] {
      std::uint32_t seq = 0;
      std::mt19937_64 rng(1);
      while (!stop.load()) {
        const Key k = rng() % 64;
        const auto stamp = static_cast<std::uint64_t>(index.clock().read());
        if (rng() % 5 == 0) {
          index.remove(k);
        } else {
          index.insert(k, (stamp << 32) | ++seq);
        }
      }
    });
    std::size_t checked = 0;
    for (int i = 0; i < 20'000; ++i) {
      Timestamp ts = -1;
      const RangeResult r = index.range(0, 63, Index::kUnlimited, &ts);
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (j > 0) REQUIRE(r[j].first > r[j - 1].first);
        // Built pairs carry value == key, which is below 2^32.
        if (r[j].second >> 32 != 0) {
          REQUIRE(static_cast<Timestamp>(r[j].second >> 32) <= ts);
          ++checked;
        }
      }
      if (i % 64 == 0) std::this_thread::yield();
    }
    stop = true;
    writer.join();
    CHECK(checked > 0);
  }

  TEST_CASE("scans and searches stay correct against a bin frozen mid-transformation") {
    IndexConfig config = verify::tiny_index_config();
    config.olb_threshold = 3;
    const std::vector<std::pair<Key, Value>> root{{0, 1}, {100, 2}};
    std::string error;
    std::size_t frozen_observed = 0;
    const auto make = [&] {
      auto index = std::make_shared<Index>(root, config);
      for (Key k : {10, 20, 30}) index->insert(k, k);
      std::vector<std::function<void()>> tasks;
      tasks.emplace_back([index] { index->insert(40, 40); });
      tasks.emplace_back([index, &error, &frozen_observed] {
        const SeekResult s = index->seek(10);
        if (s.status == SeekStatus::kMaybe && s.bin->is_one_level() &&
            static_cast<OneLevelBin*>(s.bin)->head.load().frozen) {
          ++frozen_observed;
        }
        const RangeResult r = index->range(5, 90);
        const RangeResult base{{10, 10}, {20, 20}, {30, 30}};
        const RangeResult with{{10, 10}, {20, 20}, {30, 30}, {40, 40}};
        if (r != base && r != with) error = "range";
        for (Key k : {10, 20, 30}) {
          if (index->search(k) != Payload(k)) error = "search";
        }
      });
      return tasks;
    };
    const std::size_t runs = verify::explore_schedules(make, [](const auto&) {}, 3000);
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
      verify::DeterministicScheduler sched(verify::random_chooser(seed));
      sched.run(make());
    }
    CHECK(runs == 3000);
    CHECK(error.empty());
    CHECK(frozen_observed > 0);
  }
}
