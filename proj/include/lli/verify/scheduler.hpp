#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

#include "lli/instrument.hpp"

namespace lli::verify {

// Runs tasks on real threads but lets exactly one of them execute at a time.
// Control changes hands only at instrumentation steps, so a schedule is fully
// determined by the sequence of choices returned by the chooser.
class DeterministicScheduler final : public instrument::Observer {
 public:
  // Given the number of runnable tasks, returns which one runs next.
  using Chooser = std::function<std::size_t(std::size_t runnable)>;

  struct Decision {
    std::size_t choice;
    std::size_t options;
  };

  enum class TraceKind : std::uint8_t { kStep, kCasOk, kCasFailed };

  struct TraceRecord {
    std::size_t task;
    const void* loc;
    TraceKind kind;
  };

  explicit DeterministicScheduler(Chooser chooser);

  void run(std::vector<std::function<void()>> tasks);

  void step(const void* loc) override;
  void cas_outcome(const void* loc, bool ok) override;

  const std::vector<Decision>& decisions() const { return decisions_; }
  // Every step and CAS outcome, in execution order.
  const std::vector<TraceRecord>& trace() const { return trace_; }

 private:
  std::size_t pick_locked();
  void hand_off_locked(std::unique_lock<std::mutex>& lock, std::size_t self);

  Chooser chooser_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t running_ = 0;
  std::vector<bool> done_;
  std::vector<Decision> decisions_;
  std::vector<TraceRecord> trace_;
  static thread_local std::size_t self_;
};

// A chooser drawing from a seeded generator.
DeterministicScheduler::Chooser random_chooser(std::uint64_t seed);

// Depth-first enumeration of every schedule of `make_tasks()`. `check` is
// called after each complete run; exploration stops after `max_runs`.
// Returns the number of schedules run.
std::size_t explore_schedules(
    const std::function<std::vector<std::function<void()>>()>& make_tasks,
    const std::function<void(const DeterministicScheduler&)>& check, std::size_t max_runs);

// True when every failed CAS in the log was preceded, since the failing
// task's previous access of that location, by a successful CAS on it from
// another task.
bool failed_cas_implies_progress(const DeterministicScheduler& sched);

}  // namespace lli::verify
