#include "lli/verify/history.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lli::verify {

namespace {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kInsert: return "insert";
    case OpKind::kDelete: return "delete";
    case OpKind::kSearch: return "search";
    case OpKind::kRange: return "range";
  }
  return "?";
}

std::uint64_t parse_u64(std::string_view tok, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::runtime_error("bad " + std::string(what) + ": '" + std::string(tok) + "'");
  }
  return v;
}

bool parse_bool(std::string_view tok) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  throw std::runtime_error("expected true|false, got '" + std::string(tok) + "'");
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

RangeResult parse_pairs(std::string_view tok) {
  if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']') {
    throw std::runtime_error("expected [k:v,...], got '" + std::string(tok) + "'");
  }
  RangeResult out;
  std::string_view body = tok.substr(1, tok.size() - 2);
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw std::runtime_error("expected k:v pair");
    out.emplace_back(parse_u64(item.substr(0, colon), "range key"),
                     parse_u64(item.substr(colon + 1), "range value"));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return out;
}

}  // namespace

bool same_result(OpKind kind, const OpResult& a, const OpResult& b) {
  switch (kind) {
    case OpKind::kInsert:
    case OpKind::kDelete: return a.flag == b.flag;
    case OpKind::kSearch: return a.payload == b.payload;
    case OpKind::kRange: return a.pairs == b.pairs;
  }
  return false;
}

std::string format_operation(const Operation& op) {
  std::ostringstream os;
  os << op_name(op.kind) << ' ' << op.key;
  if (op.kind == OpKind::kInsert || op.kind == OpKind::kRange) os << ' ' << op.arg;
  return os.str();
}

std::string format_result(OpKind kind, const OpResult& r) {
  switch (kind) {
    case OpKind::kInsert:
    case OpKind::kDelete: return r.flag ? "true" : "false";
    case OpKind::kSearch: return r.payload ? std::to_string(*r.payload) : "absent";
    case OpKind::kRange: {
      std::string s = "[";
      for (std::size_t i = 0; i < r.pairs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(r.pairs[i].first) + ':' + std::to_string(r.pairs[i].second);
      }
      return s + "]";
    }
  }
  return "?";
}

std::string format_event(const HistoryEvent& e) {
  std::ostringstream os;
  os << e.invoke << ' ' << e.respond << ' ' << e.thread << ' ' << format_operation(e.op) << " -> "
     << format_result(e.op.kind, e.result);
  return os.str();
}

HistoryEvent parse_event(std::string_view line) {
  const auto tok = split_ws(line);
  auto need = [&](std::size_t n) {
    if (tok.size() != n) throw std::runtime_error("wrong field count in '" + std::string(line) + "'");
  };
  if (tok.size() < 6) throw std::runtime_error("truncated event '" + std::string(line) + "'");
  HistoryEvent e;
  e.invoke = parse_u64(tok[0], "invoke tick");
  e.respond = parse_u64(tok[1], "respond tick");
  e.thread = static_cast<std::uint32_t>(parse_u64(tok[2], "thread"));
  if (e.respond < e.invoke) throw std::runtime_error("response precedes invocation");
  const std::string_view op = tok[3];
  e.op.key = parse_u64(tok[4], "key");
  std::size_t arrow = 5;
  if (op == "insert" || op == "range") {
    need(8);
    e.op.kind = op == "insert" ? OpKind::kInsert : OpKind::kRange;
    e.op.arg = parse_u64(tok[5], "argument");
    arrow = 6;
  } else if (op == "delete" || op == "search") {
    need(7);
    e.op.kind = op == "delete" ? OpKind::kDelete : OpKind::kSearch;
  } else {
    throw std::runtime_error("unknown operation '" + std::string(op) + "'");
  }
  if (tok[arrow] != "->") throw std::runtime_error("expected '->'");
  const std::string_view res = tok[arrow + 1];
  switch (e.op.kind) {
    case OpKind::kInsert:
    case OpKind::kDelete: e.result.flag = parse_bool(res); break;
    case OpKind::kSearch:
      if (res != "absent") e.result.payload = parse_u64(res, "search result");
      break;
    case OpKind::kRange: e.result.pairs = parse_pairs(res); break;
  }
  return e;
}

void write_history(std::ostream& os, std::span<const HistoryEvent> events,
                   std::span<const std::pair<Key, Value>> initial) {
  os << "# lli history v1: invoke respond thread op args -> result\n";
  if (!initial.empty()) {
    os << "# initial";
    for (const auto& [k, v] : initial) os << ' ' << k << ':' << v;
    os << '\n';
  }
  for (const auto& e : events) os << format_event(e) << '\n';
}

namespace {

std::vector<std::pair<Key, Value>> parse_initial(std::string_view rest) {
  std::vector<std::pair<Key, Value>> out;
  std::istringstream is{std::string(rest)};
  std::string tok;
  while (is >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad initial pair '" + tok + "'");
    try {
      out.emplace_back(std::stoull(tok.substr(0, colon)), std::stoull(tok.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw std::runtime_error("bad initial pair '" + tok + "'");
    }
    if (out.size() > 1 && out.back().first <= out[out.size() - 2].first) {
      throw std::runtime_error("initial keys must be strictly increasing");
    }
  }
  return out;
}

}  // namespace

HistoryLog read_history(std::istream& is) {
  HistoryLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      if (line[first] == '#') {
        const std::string_view rest = std::string_view(line).substr(first + 1);
        const auto word = rest.find_first_not_of(' ');
        if (word != std::string_view::npos && rest.substr(word).starts_with("initial")) {
          log.initial = parse_initial(rest.substr(word + 7));
        }
        continue;
      }
      log.events.push_back(parse_event(line));
    } catch (const std::runtime_error& err) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return log;
}

OpResult execute(Index& index, const Operation& op) {
  OpResult r;
  switch (op.kind) {
    case OpKind::kInsert: r.flag = index.insert(op.key, op.arg); break;
    case OpKind::kDelete: r.flag = index.remove(op.key); break;
    case OpKind::kSearch: r.payload = index.search(op.key); break;
    case OpKind::kRange: r.pairs = index.range(op.key, op.arg); break;
  }
  return r;
}

}  // namespace lli::verify
