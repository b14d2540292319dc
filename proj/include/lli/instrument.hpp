#pragma once

// Optional per-thread hooks placed at every shared-memory step of the index.
// With no observer installed each hook is a single thread_local load.

namespace lli::instrument {

class Observer {
 public:
  virtual ~Observer() = default;
  // Called before a load or CAS of the shared word at `loc`.
  virtual void step(const void* loc) = 0;
  virtual void cas_outcome(const void* /*loc*/, bool /*ok*/) {}
};

inline thread_local Observer* current = nullptr;

inline void step(const void* loc) {
  if (Observer* o = current) o->step(loc);
}

inline void cas_outcome(const void* loc, bool ok) {
  if (Observer* o = current) o->cas_outcome(loc, ok);
}

// Installs an observer on the calling thread for the lifetime of the guard.
class ScopedObserver {
 public:
  explicit ScopedObserver(Observer* o) : prev_(current) { current = o; }
  ~ScopedObserver() { current = prev_; }
  ScopedObserver(const ScopedObserver&) = delete;
  ScopedObserver& operator=(const ScopedObserver&) = delete;

 private:
  Observer* prev_;
};

}  // namespace lli::instrument
