#include "lli/verify/scheduler.hpp"

#include <random>
#include <thread>

namespace lli::verify {

thread_local std::size_t DeterministicScheduler::self_ = 0;

DeterministicScheduler::DeterministicScheduler(Chooser chooser) : chooser_(std::move(chooser)) {}

std::size_t DeterministicScheduler::pick_locked() {
  std::vector<std::size_t> runnable;
  for (std::size_t i = 0; i < done_.size(); ++i) {
    if (!done_[i]) runnable.push_back(i);
  }
  if (runnable.size() == 1) return runnable.front();
  const std::size_t c = chooser_(runnable.size());
  decisions_.push_back({c, runnable.size()});
  return runnable.at(c);
}

void DeterministicScheduler::hand_off_locked(std::unique_lock<std::mutex>& lock, std::size_t self) {
  const std::size_t next = pick_locked();
  if (next == self) return;
  running_ = next;
  cv_.notify_all();
  cv_.wait(lock, [&] { return running_ == self; });
}

void DeterministicScheduler::run(std::vector<std::function<void()>> tasks) {
  const std::size_t n = tasks.size();
  if (n == 0) return;
  {
    std::lock_guard lock(mu_);
    done_.assign(n, false);
    decisions_.clear();
    trace_.clear();
    running_ = pick_locked();
  }
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    threads.emplace_back([this, i, &tasks] {
      self_ = i;
      instrument::ScopedObserver guard(this);
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return running_ == i; });
      }
      tasks[i]();
      std::lock_guard lock(mu_);
      done_[i] = true;
      bool remaining = false;
      for (bool d : done_) remaining |= !d;
      if (remaining) {
        running_ = pick_locked();
        cv_.notify_all();
      }
    });
  }
  for (auto& t : threads) t.join();
}

void DeterministicScheduler::step(const void* loc) {
  std::unique_lock lock(mu_);
  trace_.push_back({self_, loc, TraceKind::kStep});
  hand_off_locked(lock, self_);
}

void DeterministicScheduler::cas_outcome(const void* loc, bool ok) {
  std::lock_guard lock(mu_);
  trace_.push_back({self_, loc, ok ? TraceKind::kCasOk : TraceKind::kCasFailed});
}

DeterministicScheduler::Chooser random_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](std::size_t n) { return static_cast<std::size_t>((*rng)() % n); };
}

std::size_t explore_schedules(
    const std::function<std::vector<std::function<void()>>()>& make_tasks,
    const std::function<void(const DeterministicScheduler&)>& check, std::size_t max_runs) {
  std::vector<std::size_t> prefix;
  std::size_t runs = 0;
  while (runs < max_runs) {
    std::size_t pos = 0;
    DeterministicScheduler sched([&](std::size_t) {
      const std::size_t c = pos < prefix.size() ? prefix[pos] : 0;
      ++pos;
      return c;
    });
    sched.run(make_tasks());
    check(sched);
    ++runs;
    const auto& d = sched.decisions();
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(d.size()) - 1;
    while (i >= 0 && d[i].choice + 1 >= d[i].options) --i;
    if (i < 0) break;
    prefix.clear();
    for (std::ptrdiff_t j = 0; j < i; ++j) prefix.push_back(d[j].choice);
    prefix.push_back(d[i].choice + 1);
  }
  return runs;
}

bool failed_cas_implies_progress(const DeterministicScheduler& sched) {
  using Kind = DeterministicScheduler::TraceKind;
  const auto& t = sched.trace();
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (t[p].kind != Kind::kCasFailed) continue;
    // Skip the step that immediately precedes the CAS, then find the
    // failing task's earlier access of the same word.
    std::ptrdiff_t q = static_cast<std::ptrdiff_t>(p) - 1;
    bool skipped_pre_cas = false;
    for (; q >= 0; --q) {
      if (t[q].task != t[p].task || t[q].loc != t[p].loc || t[q].kind != Kind::kStep) continue;
      if (!skipped_pre_cas) {
        skipped_pre_cas = true;
        continue;
      }
      break;
    }
    bool witnessed = false;
    for (std::size_t r = static_cast<std::size_t>(q + 1); r < p && !witnessed; ++r) {
      witnessed = t[r].kind == Kind::kCasOk && t[r].loc == t[p].loc && t[r].task != t[p].task;
    }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace lli::verify
