#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lli/core.hpp"
#include "lli/index.hpp"

namespace lli::verify {

enum class OpKind : std::uint8_t { kInsert, kDelete, kSearch, kRange };

struct Operation {
  OpKind kind = OpKind::kSearch;
  Key key = 0;
  // Insert payload, or range width.
  std::uint64_t arg = 0;

  static Operation insert(Key k, Value v) { return {OpKind::kInsert, k, v}; }
  static Operation remove(Key k) { return {OpKind::kDelete, k, 0}; }
  static Operation search(Key k) { return {OpKind::kSearch, k, 0}; }
  static Operation range(Key k, Key width) { return {OpKind::kRange, k, width}; }

  bool operator==(const Operation&) const = default;
};

// Only the field matching the operation kind is meaningful.
struct OpResult {
  bool flag = false;
  Payload payload;
  RangeResult pairs;

  bool operator==(const OpResult&) const = default;
};

bool same_result(OpKind kind, const OpResult& a, const OpResult& b);

struct HistoryEvent {
  std::uint32_t thread = 0;
  Operation op;
  OpResult result;
  std::uint64_t invoke = 0;
  std::uint64_t respond = 0;
};

// One event per line:
//   <invoke> <respond> <thread> insert <key> <value> -> true|false
//   <invoke> <respond> <thread> delete <key> -> true|false
//   <invoke> <respond> <thread> search <key> -> <value>|absent
//   <invoke> <respond> <thread> range <key> <width> -> [k:v,k:v,...]
// A line "# initial k:v k:v ..." lists the pairs present before the first
// event; other blank lines and lines starting with '#' are ignored.
std::string format_event(const HistoryEvent& e);
std::string format_result(OpKind kind, const OpResult& r);
std::string format_operation(const Operation& op);

// Throws std::runtime_error on malformed input.
HistoryEvent parse_event(std::string_view line);

struct HistoryLog {
  std::vector<std::pair<Key, Value>> initial;
  std::vector<HistoryEvent> events;
};

void write_history(std::ostream& os, std::span<const HistoryEvent> events,
                   std::span<const std::pair<Key, Value>> initial = {});
HistoryLog read_history(std::istream& is);

// Runs `op` against the index and returns its observable result.
OpResult execute(Index& index, const Operation& op);

}  // namespace lli::verify
