#include <doctest.h>

#include <memory>
#include <set>
#include <vector>

#include "lli/core.hpp"
#include "lli/verify/scheduler.hpp"

using namespace lli;
using lli::verify::DeterministicScheduler;
using lli::verify::explore_schedules;

namespace {

struct alignas(8) Cell {
  int v = 0;
};

std::size_t chain_length(const VersionHead& head) {
  std::size_t n = 0;
  for (const VersionedValue* v = head.load(); v != nullptr; v = v->vnext) ++n;
  return n;
}

void advance(GlobalClock& clock, int times) {
  for (int i = 0; i < times; ++i) clock.read_and_bump();
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("clock reads and bumps sequentially") {
    GlobalClock clock;
    CHECK(clock.read() == 0);
    CHECK(clock.read_and_bump() == 0);
    CHECK(clock.read() == 1);
    CHECK(clock.read_and_bump() == 1);
    CHECK(clock.read_and_bump() == 2);
    CHECK(clock.read() == 3);
  }

  TEST_CASE("two racing bumps return equal or consecutive values") {
    std::vector<std::pair<Timestamp, Timestamp>> results;
    std::vector<Timestamp> after;
    std::shared_ptr<GlobalClock> clock;
    Timestamp a = 0, b = 0;
    explore_schedules(
        [&] {
          clock = std::make_shared<GlobalClock>();
          advance(*clock, 5);
          return std::vector<std::function<void()>>{[&] { a = clock->read_and_bump(); },
                                                    [&] { b = clock->read_and_bump(); }};
        },
        [&](const DeterministicScheduler& s) {
          results.emplace_back(std::min(a, b), std::max(a, b));
          after.push_back(clock->read());
          CHECK(verify::failed_cas_implies_progress(s));
        },
        1000);
    REQUIRE(!results.empty());
    bool saw_equal = false, saw_consecutive = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto [lo, hi] = results[i];
      CHECK(lo == 5);
      CHECK((hi == 5 || hi == 6));
      saw_equal |= hi == 5;
      saw_consecutive |= hi == 6;
      CHECK(after[i] == hi + 1);
    }
    CHECK(saw_equal);
    CHECK(saw_consecutive);
  }

  TEST_CASE("init_ts assigns once") {
    GlobalClock clock;
    advance(clock, 7);
    VersionedValue v(Payload(1), nullptr);
    init_ts(v, clock);
    CHECK(v.ts.load() == 7);
    advance(clock, 2);
    init_ts(v, clock);
    CHECK(v.ts.load() == 7);

    VersionedValue w(Payload(1), nullptr, 3);
    init_ts(w, clock);
    CHECK(w.ts.load() == 3);
  }

  TEST_CASE("racing init_ts settles on one of the offered clock values") {
    std::set<Timestamp> seen;
    std::shared_ptr<VersionedValue> v;
    std::shared_ptr<GlobalClock> clock;
    explore_schedules(
        [&] {
          v = std::make_shared<VersionedValue>(Payload(1), nullptr);
          clock = std::make_shared<GlobalClock>();
          advance(*clock, 4);
          return std::vector<std::function<void()>>{[&] { init_ts(*v, *clock); },
                                                    [&] {
                                                      clock->read_and_bump();
                                                      init_ts(*v, *clock);
                                                    }};
        },
        [&](const DeterministicScheduler&) {
          const Timestamp t = v->ts.load();
          seen.insert(t);
          init_ts(*v, *clock);
          CHECK(v->ts.load() == t);
        },
        10'000);
    CHECK(seen == std::set<Timestamp>{4, 5});
  }

  TEST_CASE("read_value_latest stamps the head") {
    GlobalClock clock;
    advance(clock, 2);
    VersionHead head{new VersionedValue(Payload(42), nullptr)};
    CHECK(read_value_latest(head, clock) == Payload(42));
    CHECK(head.load()->ts.load() == 2);
    free_chain(head.load());

    VersionHead deleted{new VersionedValue(std::nullopt, nullptr, 2)};
    CHECK(read_value_latest(deleted, clock) == std::nullopt);
    free_chain(deleted.load());

    VersionHead chain{new VersionedValue(Payload(9), new VersionedValue(Payload(1), nullptr, 3), 5)};
    CHECK(read_value_latest(chain, clock) == Payload(9));
    free_chain(chain.load());
  }

  TEST_CASE("write_value pushes versions and rejects equal payloads") {
    GlobalClock clock;
    VersionHead head{new VersionedValue(Payload(1), nullptr, 0)};
    advance(clock, 3);
    CHECK(write_value(head, Payload(2), clock));
    CHECK(chain_length(head) == 2);
    CHECK(head.load()->ts.load() == 3);
    CHECK(head.load()->vnext->ts.load() == 0);

    CHECK_FALSE(write_value(head, Payload(2), clock));
    CHECK(chain_length(head) == 2);

    CHECK(write_value(head, std::nullopt, clock));
    CHECK_FALSE(write_value(head, std::nullopt, clock));
    CHECK(write_value(head, Payload(2), clock));
    CHECK(chain_length(head) == 4);
    free_chain(head.load());
  }

  TEST_CASE("two racing writers both land with non-increasing timestamps toward the tail") {
    std::set<Value> finals;
    std::shared_ptr<VersionHead> head;
    std::shared_ptr<GlobalClock> clock;
    bool r7 = false, r8 = false;
    std::size_t schedules = explore_schedules(
        [&] {
          if (head) free_chain(head->load());
          head = std::make_shared<VersionHead>(new VersionedValue(Payload(1), nullptr, 0));
          clock = std::make_shared<GlobalClock>();
          return std::vector<std::function<void()>>{
              [&] {
                r7 = write_value(*head, Payload(7), *clock);
                clock->read_and_bump();
              },
              [&] {
                r8 = write_value(*head, Payload(8), *clock);
                clock->read_and_bump();
              }};
        },
        [&](const DeterministicScheduler& s) {
          CHECK(r7);
          CHECK(r8);
          CHECK(chain_length(*head) == 3);
          finals.insert(*head->load()->val);
          Timestamp newer = head->load()->ts.load();
          for (const VersionedValue* v = head->load()->vnext; v != nullptr; v = v->vnext) {
            CHECK(v->ts.load() != kUnsetTs);
            CHECK(v->ts.load() <= newer);
            newer = v->ts.load();
          }
          CHECK(verify::failed_cas_implies_progress(s));
        },
        1'000'000);
    if (head) free_chain(head->load());
    CHECK(schedules < 1'000'000);
    CHECK(finals == std::set<Value>{7, 8});
  }

  TEST_CASE("read_value_at walks to the version visible at ts") {
    GlobalClock clock;
    advance(clock, 10);
    VersionHead chain{new VersionedValue(Payload(9), new VersionedValue(Payload(1), nullptr, 3), 5)};
    CHECK(read_value_at(chain, 4, clock) == VersionedRead::of(1));
    CHECK(read_value_at(chain, 5, clock) == VersionedRead::of(9));
    CHECK(read_value_at(chain, 2, clock) == VersionedRead::tombstone());
    free_chain(chain.load());

    VersionHead deleted{new VersionedValue(std::nullopt, nullptr, 2)};
    CHECK(read_value_at(deleted, 2, clock) == VersionedRead::deleted());
    free_chain(deleted.load());

    VersionHead only{new VersionedValue(Payload(9), nullptr, 5)};
    CHECK(read_value_at(only, 4, clock) == VersionedRead::tombstone());
    free_chain(only.load());

    VersionHead none{nullptr};
    CHECK(read_value_at(none, 100, clock) == VersionedRead::tombstone());

    VersionHead fresh{new VersionedValue(Payload(3), nullptr)};
    CHECK(read_value_at(fresh, 9, clock) == VersionedRead::tombstone());
    CHECK(fresh.load()->ts.load() == 10);
    free_chain(fresh.load());
  }

  TEST_CASE("marked link packs target and flag together") {
    Cell a, b;
    MarkedLink<Cell> link(&a);
    CHECK(link.load() == MarkedLink<Cell>::Snapshot{&a, false});
    CHECK_FALSE(link.compare_and_swap({&b, false}, {&a, true}));
    CHECK(link.compare_and_swap({&a, false}, {&a, true}));
    CHECK(link.load() == MarkedLink<Cell>::Snapshot{&a, true});
    // Once frozen, an unfrozen expectation no longer matches.
    CHECK_FALSE(link.compare_and_swap({&a, false}, {&b, false}));
    CHECK(link.load().target == &a);

    MarkedLink<Cell> empty;
    CHECK(empty.load() == MarkedLink<Cell>::Snapshot{nullptr, false});
    CHECK(empty.compare_and_swap({nullptr, false}, {nullptr, true}));
    CHECK(empty.load().frozen);
  }
}
