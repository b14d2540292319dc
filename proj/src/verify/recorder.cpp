#include "lli/verify/recorder.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "lli/verify/scheduler.hpp"

namespace lli::verify {

OpResult HistoryRecorder::record(Index& index, std::uint32_t thread, const Operation& op) {
  HistoryEvent e;
  e.thread = thread;
  e.op = op;
  e.invoke = tick_.fetch_add(1);
  e.result = execute(index, op);
  e.respond = tick_.fetch_add(1);
  logs_.at(thread).push_back(e);
  return e.result;
}

std::vector<HistoryEvent> HistoryRecorder::merged() const {
  std::vector<HistoryEvent> all;
  for (const auto& log : logs_) all.insert(all.end(), log.begin(), log.end());
  std::sort(all.begin(), all.end(),
            [](const HistoryEvent& a, const HistoryEvent& b) { return a.invoke < b.invoke; });
  return all;
}

IndexConfig tiny_index_config() {
  IndexConfig c;
  c.root_eps = 1.0;
  c.olb_threshold = 2;
  c.tlb_threshold = 4;
  c.fanout = 2;
  return c;
}

RecordedHistory record_random_history(const RandomHistorySpec& spec, std::uint64_t seed,
                                      bool deterministic) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };

  RecordedHistory out;
  std::set<Key> prefill;
  const std::size_t want = uniform(spec.prefill + 1);
  while (prefill.size() < std::min<std::size_t>(want, spec.key_domain)) prefill.insert(uniform(spec.key_domain));
  for (Key k : prefill) out.initial.emplace_back(k, 1 + uniform(spec.value_domain));

  std::vector<std::vector<Operation>> plans(spec.threads);
  const std::size_t total = 1 + uniform(spec.max_ops);
  for (std::size_t i = 0; i < total; ++i) {
    const Key k = uniform(spec.key_domain);
    const std::uint64_t roll = uniform(100);
    Operation op;
    if (roll < 40) {
      op = Operation::insert(k, 1 + uniform(spec.value_domain));
    } else if (roll < 60) {
      op = Operation::remove(k);
    } else if (roll < 85 || !spec.with_ranges) {
      op = Operation::search(k);
    } else {
      op = Operation::range(k, uniform(4));
    }
    plans[uniform(spec.threads)].push_back(op);
  }

  Index index(out.initial, tiny_index_config());
  HistoryRecorder recorder(spec.threads);
  std::vector<std::function<void()>> tasks;
  for (std::size_t t = 0; t < spec.threads; ++t) {
    tasks.emplace_back([&, t] {
      for (const Operation& op : plans[t]) recorder.record(index, static_cast<std::uint32_t>(t), op);
    });
  }
  if (deterministic) {
    DeterministicScheduler sched(random_chooser(seed ^ 0x9e3779b97f4a7c15ULL));
    sched.run(std::move(tasks));
  } else {
    std::vector<std::thread> threads;
    for (auto& task : tasks) threads.emplace_back(task);
    for (auto& th : threads) th.join();
  }
  out.events = recorder.merged();
  return out;
}

}  // namespace lli::verify
