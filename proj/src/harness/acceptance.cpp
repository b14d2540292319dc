#include "lli/harness/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "lli/harness/dataset.hpp"
#include "lli/harness/workload.hpp"
#include "lli/index.hpp"
#include "lli/models.hpp"
#include "lli/verify/audit.hpp"
#include "lli/verify/checker.hpp"
#include "lli/verify/history.hpp"
#include "lli/verify/oracle.hpp"
#include "lli/verify/recorder.hpp"
#include "lli/verify/scheduler.hpp"

namespace lli::harness {

namespace {

using verify::Operation;
using verify::OpKind;
using verify::OpResult;

struct Outcome {
  CriterionStatus status;
  std::string detail;
};

Outcome pass(std::string d) { return {CriterionStatus::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {CriterionStatus::kFail, std::move(d)}; }

// Time limits per criterion, in seconds.
constexpr double kLimitC1 = 30, kLimitC2 = 10, kLimitC3 = 5, kLimitC4 = 60, kLimitC5 = 300,
                 kLimitC6 = 30, kLimitC7 = 30, kLimitC8 = 60;

Outcome within(Outcome o, double seconds, double limit) {
  if (o.status == CriterionStatus::kPass && seconds >= limit) {
    std::ostringstream os;
    os << o.detail << "; but took " << seconds << " s (limit " << limit << " s)";
    return fail(os.str());
  }
  return o;
}

// Version head of `key` in a quiesced index, or null when the key was never stored.
VersionHead* find_version(const Index& index, Key key) {
  const SeekResult s = index.seek(key);
  switch (s.status) {
    case SeekStatus::kFound: return &s.node->version(s.slot);
    case SeekStatus::kNotFound: return nullptr;
    case SeekStatus::kMaybe:
      if (KNode* n = search_bin(*s.bin, key)) return n->version;
      return nullptr;
  }
  return nullptr;
}

Outcome c1_sequential() {
  constexpr std::size_t kOps = 1'000'000;
  constexpr Key kDomain = 100'000;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<Key> key(0, kDomain - 1);
  std::uniform_int_distribution<Value> value(1, 16);

  std::vector<std::pair<Key, Value>> initial;
  for (Key k = 0; k < kDomain; k += 500) initial.emplace_back(k, k);
  IndexConfig config;
  config.olb_threshold = 16;
  config.tlb_threshold = 128;
  config.fanout = 4;
  std::size_t transformations = 0;
  config.on_transition = [&](std::optional<NodeKind> from, NodeKind) { transformations += from.has_value(); };
  Index index(initial, config);
  verify::Oracle oracle(initial);

  std::size_t counts[4] = {};
  for (std::size_t i = 0; i < kOps; ++i) {
    const int roll = static_cast<int>(rng() % 100);
    Operation op;
    if (roll < 40) {
      op = Operation::insert(key(rng), value(rng));
    } else if (roll < 60) {
      op = Operation::remove(key(rng));
    } else if (roll < 90) {
      op = Operation::search(key(rng));
    } else {
      op = Operation::range(key(rng), rng() % 64);
    }
    ++counts[static_cast<int>(op.kind)];
    const OpResult got = verify::execute(index, op);
    const OpResult want = oracle.apply(op);
    if (!verify::same_result(op.kind, got, want)) {
      return fail("op " + std::to_string(i) + " " + verify::format_operation(op) + ": index " +
                  verify::format_result(op.kind, got) + ", oracle " +
                  verify::format_result(op.kind, want));
    }
  }
  const verify::AuditReport audit = verify::audit_structure(index);
  if (!audit.clean()) return fail("audit: " + audit.summary());
  if (audit.live != oracle.live()) return fail("final audit map differs from oracle");
  std::ostringstream os;
  os << kOps << " ops identical (ins " << counts[0] << ", del " << counts[1] << ", search "
     << counts[2] << ", range " << counts[3] << "), " << transformations << " transformations; "
     << audit.summary();
  return pass(os.str());
}

NodeSearch reference_search(std::span<const Key> keys, Key probe) {
  const auto it = std::lower_bound(keys.begin(), keys.end(), probe);
  const auto pos = it - keys.begin();
  if (it != keys.end() && *it == probe) return {pos, true};
  return {pos - 1, false};
}

std::string check_models(std::string_view label, std::span<const Key> keys, std::mt19937_64& rng) {
  std::vector<std::pair<Key, Value>> pairs;
  pairs.reserve(keys.size());
  for (Key k : keys) pairs.emplace_back(k, k);
  const auto root = ModelNode::make_root(pairs, 32.0);
  const auto segments = root->segments();

  std::size_t covered = 0;
  for (const Segment& s : segments) {
    if (s.start_index != covered) return std::string(label) + ": segments not contiguous";
    for (std::size_t i = 0; i < s.length; ++i) {
      const Key k = keys[s.start_index + i];
      const std::size_t p = predict(s.model, k, s.length);
      const double diff = std::abs(static_cast<double>(p) - static_cast<double>(i));
      if (diff > s.model.eps) {
        return std::string(label) + ": key " + std::to_string(k) + " rank " + std::to_string(i) +
               " predicted " + std::to_string(p) + " outside eps " + std::to_string(s.model.eps);
      }
    }
    covered += s.length;
  }
  if (covered != keys.size()) return std::string(label) + ": segments do not cover all keys";

  const Model whole = fit_linear(keys);
  std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
  const Key hi = keys.back() + 1000;
  std::uniform_int_distribution<Key> any(0, hi);
  for (int i = 0; i < 100'000; ++i) {
    Key probe = (i & 1) ? keys[pick(rng)] : any(rng);
    if (i % 7 == 0) probe = keys[pick(rng)] + 1;
    const NodeSearch want = reference_search(keys, probe);
    const NodeSearch seg = search_segmented(keys, segments, probe);
    const NodeSearch exp = search_exponential(keys, whole, probe);
    if (seg != want || exp != want) {
      return std::string(label) + ": probe " + std::to_string(probe) + " disagrees with binary search";
    }
  }
  return {};
}

Outcome c2_models() {
  std::mt19937_64 rng(202);
  std::ostringstream os;
  for (DatasetSource src : {DatasetSource::kUniform, DatasetSource::kLognormal}) {
    const char* label = src == DatasetSource::kUniform ? "uniform" : "lognormal";
    const auto keys = generate_dataset({src, 100'000, 7, {}});
    if (std::string err = check_models(label, keys, rng); !err.empty()) return fail(err);
    os << label << " ok; ";
  }
  os << "every rank within eps of its segment prediction, 2x100000 probes agree";
  return pass(os.str());
}

Outcome c3_published_fit() {
  const auto keys = generate_dataset({DatasetSource::kUniform, 100'000, 3, {}});
  const Model ref = fit_linear(keys);
  auto bits = [](const Model& m) {
    return std::array{std::bit_cast<std::uint64_t>(m.a), std::bit_cast<std::uint64_t>(m.b),
                      std::bit_cast<std::uint64_t>(m.eps)};
  };
  for (std::size_t helpers : {1, 8, 32}) {
    const Model got = fit_linear_published(keys, helpers);
    if (bits(got) != bits(ref)) {
      return fail("helpers=" + std::to_string(helpers) + " model differs from the sequential fit");
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "1/8/32 helpers bit-identical (a=" << ref.a << " b=" << ref.b << " eps=" << ref.eps << ")";
  return pass(os.str());
}

Outcome c4_no_lost_pair() {
  constexpr std::size_t kThreads = 8;
  constexpr std::size_t kPerThread = 100'000;
  constexpr std::size_t kRoot = 64;
  const auto keys = generate_dataset({DatasetSource::kUniform, kThreads * kPerThread + kRoot, 4, {}});
  std::vector<std::pair<Key, Value>> root;
  std::vector<std::vector<Key>> plans(kThreads);
  const std::size_t stride = keys.size() / kRoot;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i % stride == stride / 2 && root.size() < kRoot) {
      root.emplace_back(keys[i], keys[i] ^ 0xabcdef);
    } else {
      plans[i % kThreads].push_back(keys[i]);
    }
  }
  std::map<Key, Value> expected(root.begin(), root.end());
  for (auto& plan : plans) {
    for (Key k : plan) expected[k] = k ^ 0xabcdef;
  }

  std::atomic<std::size_t> to_tlb{0}, to_node{0}, fresh{0};
  IndexConfig config;
  config.olb_threshold = 8;
  config.tlb_threshold = 64;
  config.fanout = 4;
  config.on_transition = [&](std::optional<NodeKind> from, NodeKind to) {
    if (!from) {
      fresh.fetch_add(1, std::memory_order_relaxed);
    } else if (to == NodeKind::kTwoLevelBin) {
      to_tlb.fetch_add(1, std::memory_order_relaxed);
    } else {
      to_node.fetch_add(1, std::memory_order_relaxed);
    }
  };
  Index index(root, config);

  std::atomic<std::size_t> failures{0};
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      std::vector<Key> mine = plans[t];
      std::shuffle(mine.begin(), mine.end(), std::mt19937_64(t + 40));
      for (Key k : mine) {
        if (!index.insert(k, k ^ 0xabcdef)) failures.fetch_add(1);
      }
    });
  }
  for (auto& th : threads) th.join();

  const verify::AuditReport audit = verify::audit_structure(index);
  if (failures.load() != 0) return fail(std::to_string(failures.load()) + " fresh inserts returned false");
  if (!audit.clean()) return fail("audit: " + audit.summary());
  if (audit.live != expected) {
    std::size_t missing = 0;
    for (const auto& [k, v] : expected) missing += audit.live.count(k) == 0;
    return fail("audit map differs from the union of inserts; missing " + std::to_string(missing));
  }
  const std::size_t transformations = to_tlb.load() + to_node.load();
  if (transformations < 1000) {
    return fail("only " + std::to_string(transformations) + " transformations; workload too weak");
  }
  std::ostringstream os;
  os << expected.size() << " pairs intact after " << to_tlb.load() << " OLB->TLB and " << to_node.load()
     << " TLB->node transformations; " << audit.summary();
  return pass(os.str());
}

// Rewrites one result so that no sequential order can explain it.
bool plant_violation(verify::RecordedHistory& h, std::mt19937_64& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const OpKind k = h.events[i].op.kind;
    if (k == OpKind::kSearch || k == OpKind::kRange) candidates.push_back(i);
  }
  if (candidates.empty()) return false;
  verify::HistoryEvent& e = h.events[candidates[rng() % candidates.size()]];
  constexpr Value kNeverWritten = 1'000'000;
  if (e.op.kind == OpKind::kSearch) {
    e.result.payload = kNeverWritten;
  } else {
    e.result.pairs.assign(1, {e.op.key, kNeverWritten});
  }
  return true;
}

Outcome c5_linearizability(const std::string& corpus_dir) {
  constexpr std::size_t kHistories = 10'000;
  verify::RandomHistorySpec spec;
  std::size_t deterministic = 0, states = 0, with_range = 0;
  for (std::size_t i = 0; i < kHistories; ++i) {
    const bool det = i % 2 == 0;
    deterministic += det;
    const verify::RecordedHistory h = verify::record_random_history(spec, 5000 + i, det);
    const auto verdict = verify::check_linearizable(h.events, h.initial);
    states += verdict.states_explored;
    with_range += std::any_of(h.events.begin(), h.events.end(),
                              [](const auto& e) { return e.op.kind == OpKind::kRange; });
    if (!verdict.linearizable) {
      std::ostringstream os;
      os << "history seed " << 5000 + i << " rejected:\n";
      verify::write_history(os, h.events, h.initial);
      os << verdict.describe(h.events);
      return fail(os.str());
    }
  }

  std::mt19937_64 rng(55);
  std::size_t planted = 0;
  for (std::size_t i = 0; planted < 500; ++i) {
    verify::RecordedHistory h = verify::record_random_history(spec, 90'000 + i, i % 2 == 0);
    if (!plant_violation(h, rng)) continue;
    ++planted;
    if (verify::check_linearizable(h.events, h.initial).linearizable) {
      return fail("planted violation accepted (seed " + std::to_string(90'000 + i) + ")");
    }
  }

  std::size_t logs = 0;
  if (!corpus_dir.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
      if (entry.path().extension() != ".log") continue;
      std::ifstream in(entry.path());
      const verify::HistoryLog log = verify::read_history(in);
      ++logs;
      if (verify::check_linearizable(log.events, log.initial).linearizable) {
        return fail("committed violation " + entry.path().filename().string() + " accepted");
      }
    }
    if (logs == 0) return fail("no planted-violation logs found in " + corpus_dir);
  }
  std::ostringstream os;
  os << kHistories << " histories linearizable (" << deterministic << " scheduled, "
     << kHistories - deterministic << " free-running, " << with_range << " with ranges, " << states
     << " checker states); " << planted << " mutated and " << logs << " committed violations rejected";
  return pass(os.str());
}

struct ScanRecord {
  Timestamp ts;
  Key lo, hi;
  RangeResult pairs;
};

Outcome c6_snapshots() {
  constexpr std::size_t kWriters = 4, kScanners = 4, kPhases = 10;
  constexpr Key kDomain = 2048;
  constexpr Key kWidth = 48;
  constexpr std::size_t kKeep = 4000;  // per scanner per phase, for the exact replay
  // Writers are paced so that version chains stay short enough to replay.
  constexpr double kWritesPerSecond = 100'000;
  const auto phase_length = std::chrono::milliseconds(1000);

  Index index({}, IndexConfig{});
  std::vector<std::map<Key, Value>> owned(kWriters);
  std::vector<std::uint32_t> seq(kWriters, 0);
  std::vector<ScanRecord> kept;
  std::size_t scans = 0, writes = 0, returned = 0, quiescent = 0;
  std::string error;

  for (std::size_t phase = 0; phase < kPhases && error.empty(); ++phase) {
    std::atomic<bool> stop{false};
    std::vector<std::thread> threads;
    std::vector<std::size_t> wrote(kWriters, 0);
    std::vector<std::vector<ScanRecord>> local(kScanners);
    std::vector<std::size_t> scanned(kScanners, 0), seen(kScanners, 0);
    std::vector<std::string> errors(kScanners);

    for (std::size_t w = 0; w < kWriters; ++w) {
      threads.emplace_back([&, w] {
        std::mt19937_64 rng(1000 * phase + w);
        const auto start = std::chrono::steady_clock::now();
        while (!stop.load(std::memory_order_relaxed)) {
          const double elapsed =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          if (static_cast<double>(wrote[w]) > elapsed * kWritesPerSecond / kWriters) {
            std::this_thread::sleep_for(std::chrono::microseconds(200));
            continue;
          }
          const Key k = (rng() % (kDomain / kWriters)) * kWriters + w;
          if (rng() % 4 == 0) {
            if (index.remove(k)) owned[w].erase(k);
          } else {
            const auto stamp = static_cast<std::uint64_t>(index.clock().read());
            const Value v = (stamp << 36) | (std::uint64_t{w} << 32) | ++seq[w];
            if (index.insert(k, v)) owned[w][k] = v;
          }
          ++wrote[w];
        }
      });
    }
    for (std::size_t s = 0; s < kScanners; ++s) {
      threads.emplace_back([&, s] {
        std::mt19937_64 rng(7000 * phase + s);
        while (!stop.load(std::memory_order_relaxed)) {
          const Key lo = rng() % kDomain;
          Timestamp ts = 0;
          RangeResult r = index.range(lo, kWidth, Index::kUnlimited, &ts);
          ++scanned[s];
          seen[s] += r.size();
          for (std::size_t i = 0; i < r.size(); ++i) {
            const auto [k, v] = r[i];
            const auto stamp = static_cast<Timestamp>(v >> 36);
            if (k < lo || k > lo + kWidth || (i > 0 && k <= r[i - 1].first)) {
              errors[s] = "scan result out of range or not ascending";
            } else if (((v >> 32) & 0xf) != k % kWriters) {
              errors[s] = "payload writer does not own key " + std::to_string(k);
            } else if (stamp > ts) {
              errors[s] = "key " + std::to_string(k) + " payload stamped " + std::to_string(stamp) +
                          " after scan ts " + std::to_string(ts);
            }
          }
          if (!errors[s].empty()) return;
          if (local[s].size() < kKeep) local[s].push_back({ts, lo, lo + kWidth, std::move(r)});
        }
      });
    }
    std::this_thread::sleep_for(phase_length);
    stop.store(true);
    for (auto& th : threads) th.join();

    for (std::size_t s = 0; s < kScanners; ++s) {
      if (!errors[s].empty() && error.empty()) error = errors[s];
      scans += scanned[s];
      returned += seen[s];
      for (auto& rec : local[s]) kept.push_back(std::move(rec));
    }
    for (std::size_t w = 0; w < kWriters; ++w) writes += wrote[w];

    // Quiescent window: full and partial ranges must equal the writers' union.
    std::map<Key, Value> all;
    for (const auto& m : owned) all.insert(m.begin(), m.end());
    for (Key lo : {Key{0}, Key{100}, Key{1000}}) {
      const Key hi = lo == 0 ? kDomain : lo + 300;
      const RangeResult got = index.range(lo, hi - lo);
      RangeResult want(all.lower_bound(lo), all.upper_bound(hi));
      ++quiescent;
      if (got != want && error.empty()) {
        error = "quiescent range [" + std::to_string(lo) + "," + std::to_string(hi) +
                "] differs from the oracle interval";
      }
    }
  }
  if (!error.empty()) return fail(error);

  // Exact replay: each kept scan equals the version chains read at its ts.
  // Chains are flattened once into ascending (ts, payload) arrays.
  std::vector<std::vector<std::pair<Timestamp, Payload>>> history(kDomain);
  for (Key k = 0; k < kDomain; ++k) {
    VersionHead* head = find_version(index, k);
    if (head == nullptr) continue;
    for (const VersionedValue* v = head->load(); v != nullptr; v = v->vnext) {
      history[k].emplace_back(v->ts.load(), v->val);
    }
    std::reverse(history[k].begin(), history[k].end());
  }
  for (const ScanRecord& rec : kept) {
    RangeResult want;
    for (Key k = rec.lo; k <= rec.hi && k < kDomain; ++k) {
      const auto& h = history[k];
      auto it = std::upper_bound(h.begin(), h.end(), rec.ts,
                                 [](Timestamp t, const auto& e) { return t < e.first; });
      if (it == h.begin()) continue;
      if (const Payload& p = std::prev(it)->second) want.emplace_back(k, *p);
    }
    if (want != rec.pairs) {
      return fail("scan at ts " + std::to_string(rec.ts) + " from " + std::to_string(rec.lo) +
                  " differs from the version history at that ts");
    }
  }
  const verify::AuditReport audit = verify::audit_structure(index);
  if (!audit.clean()) return fail("audit: " + audit.summary());
  std::ostringstream os;
  os << scans << " scans (" << returned << " pairs) against " << writes << " writes over "
     << kPhases << " phases: every payload stamped before its scan ts; " << kept.size()
     << " scans replayed exactly against version history; " << quiescent << " quiescent ranges exact";
  return pass(os.str());
}

Outcome c7_fidelity() {
  const auto dataset = generate_dataset({DatasetSource::kUniform, 100'000, 9, {}});
  std::ostringstream os;
  for (const char* name : {"read-heavy", "update-heavy"}) {
    WorkloadSpec spec = workload_preset(name);
    spec.total_ops = 1'000'000;
    spec.threads = 2;
    spec.prefill = 50'000;
    Index index(prefill_pairs(dataset, spec.prefill, spec.seed));
    const ThroughputReport r = run_workload(index, dataset, spec);
    const double n = static_cast<double>(r.total_ops);
    const double got[3] = {r.searches / n, r.inserts / n, r.deletes / n};
    const double want[3] = {spec.mix.search, spec.mix.insert, spec.mix.remove};
    os << name << " s/i/d " << got[0] << '/' << got[1] << '/' << got[2] << "; ";
    if (r.total_ops != spec.total_ops) return fail(os.str() + "op count mismatch");
    for (int i = 0; i < 3; ++i) {
      if (std::abs(got[i] - want[i]) > 0.005) return fail(os.str() + "outside 0.5%");
    }
  }
  os << "all within 0.5% at 10^6 ops";
  return pass(os.str());
}

Outcome c8_scaling() {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 8) {
    return {CriterionStatus::kNotApplicable,
            "host reports " + std::to_string(cores) + " hardware threads; the check needs at least 8"};
  }
  const auto dataset = generate_dataset({DatasetSource::kUniform, 1'000'000, 11, {}});
  double mops[2] = {};
  const std::size_t thread_counts[2] = {1, 8};
  for (int i = 0; i < 2; ++i) {
    WorkloadSpec spec = workload_preset("read-heavy");
    spec.threads = thread_counts[i];
    spec.prefill = dataset.size();
    spec.duration_s = 3.0;
    Index index(prefill_pairs(dataset, spec.prefill, spec.seed));
    mops[i] = run_workload(index, dataset, spec).mops();
  }
  const double ratio = mops[1] / mops[0];
  std::ostringstream os;
  os << "1 thread " << mops[0] << " Mops/s, 8 threads " << mops[1] << " Mops/s, ratio " << ratio
     << " (need >= 2.5)";
  return ratio >= 2.5 ? pass(os.str()) : fail(os.str());
}

// A full one-level bin, then a transformation racing searches and scans of it.
Outcome c9_frozen_reads() {
  IndexConfig config = verify::tiny_index_config();
  config.olb_threshold = 4;
  const std::vector<std::pair<Key, Value>> root = {{0, 100}, {100, 200}};
  const std::vector<std::pair<Key, Value>> binned = {{10, 1}, {20, 2}, {30, 3}, {40, 4}};

  // Reads against a bin that is frozen and never replaced.
  {
    Index index(root, config);
    for (auto [k, v] : binned) index.insert(k, v);
    const SeekResult s = index.seek(10);
    if (s.status != SeekStatus::kMaybe) return fail("setup did not produce a bin");
    freeze_bin(*s.bin);
    for (auto [k, v] : binned) {
      if (index.search(k) != Payload(v)) return fail("search on frozen bin lost key " + std::to_string(k));
    }
    RangeResult want(root.begin(), root.end());
    want.insert(want.begin() + 1, binned.begin(), binned.end());
    if (index.range(0, 100) != want) return fail("range over frozen bin incorrect");
  }

  std::string error;
  std::size_t frozen_reads = 0;
  auto frozen_now = [](const Index& index) {
    const SeekResult s = index.seek(10);
    return s.status == SeekStatus::kMaybe && s.bin->is_one_level() &&
           static_cast<const OneLevelBin*>(s.bin)->head.load().frozen;
  };
  auto make_tasks = [&] {
    auto index = std::make_shared<Index>(root, config);
    for (auto [k, v] : binned) index->insert(k, v);
    std::vector<std::function<void()>> tasks;
    tasks.emplace_back([index] { index->insert(25, 9); });
    tasks.emplace_back([&, index] {
      for (auto [k, v] : binned) {
        frozen_reads += frozen_now(*index);
        if (index->search(k) != Payload(v) && error.empty()) {
          error = "search " + std::to_string(k) + " wrong during transformation";
        }
      }
      frozen_reads += frozen_now(*index);
      const RangeResult got = index->range(0, 100);
      RangeResult base(root.begin(), root.end());
      base.insert(base.begin() + 1, binned.begin(), binned.end());
      RangeResult with = base;
      with.insert(with.begin() + 3, {25, 9});
      if (got != base && got != with && error.empty()) error = "range wrong during transformation";
    });
    return tasks;
  };
  constexpr std::size_t kDepthFirst = 5'000, kRandom = 20'000;
  const std::size_t explored =
      verify::explore_schedules(make_tasks, [](const verify::DeterministicScheduler&) {}, kDepthFirst);
  for (std::size_t i = 0; i < kRandom && error.empty(); ++i) {
    verify::DeterministicScheduler sched(verify::random_chooser(900 + i));
    sched.run(make_tasks());
  }
  if (!error.empty()) return fail(error);
  if (frozen_reads == 0) return fail("no schedule issued a read while the bin was frozen");
  return pass("frozen bin readable in place; " + std::to_string(explored) + " depth-first and " +
              std::to_string(kRandom) + " random schedules of a transformation against searches and a scan, " +
              std::to_string(frozen_reads) + " reads issued on a frozen bin, all correct");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
  struct Entry {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "sequential ADT conformance", kLimitC1, c1_sequential},
      {2, "eps soundness and search equivalence", kLimitC2, c2_models},
      {3, "lock-free fit equivalence", kLimitC3, c3_published_fit},
      {4, "no lost pair under transformation", kLimitC4, c4_no_lost_pair},
      {5, "small-scale linearizability", kLimitC5, [&] { return c5_linearizability(options.corpus_dir); }},
      {6, "range snapshot soundness and completeness", kLimitC6, c6_snapshots},
      {7, "workload fidelity", kLimitC7, c7_fidelity},
      {8, "scaling sanity", kLimitC8, c8_scaling},
      {9, "frozen-bin read availability", 0, c9_frozen_reads},
  };
  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    if (!options.only.empty() && options.only.count(e.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = fail(std::string("exception: ") + ex.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.limit > 0) o = within(std::move(o), seconds, e.limit);
    CriterionResult r{e.id, e.name, o.status, o.detail, seconds};
    const char* tag = r.status == CriterionStatus::kPass   ? "PASS"
                      : r.status == CriterionStatus::kFail ? "FAIL"
                                                           : "N/A ";
    log << '[' << tag << "] C" << r.id << ' ' << r.name << " (" << std::fixed;
    log.precision(2);
    log << seconds << " s): ";
    log.unsetf(std::ios::fixed);
    log.precision(6);
    log << r.detail << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CriterionResult& r) { return r.status == CriterionStatus::kFail; });
}

}  // namespace lli::harness
