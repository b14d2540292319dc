#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lli/index.hpp"
#include "lli/verify/oracle.hpp"

namespace lli::verify {

struct AuditFinding {
  std::string invariant;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditFinding> findings;
  LiveMap live;
  std::size_t keys_visited = 0;
  std::size_t model_nodes = 0;
  std::size_t one_level_bins = 0;
  std::size_t two_level_bins = 0;
  std::size_t max_depth = 0;

  bool clean() const { return findings.empty(); }
  std::string summary() const;
};

// Walks a quiesced index and checks sortedness, interval containment, the
// unique-path property, size counters and version-chain timestamps.
AuditReport audit_structure(const Index& index);

}  // namespace lli::verify
