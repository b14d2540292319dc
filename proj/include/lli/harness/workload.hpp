#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lli/index.hpp"
#include "lli/verify/history.hpp"

namespace lli::harness {

struct OpMix {
  double search = 1.0;
  double insert = 0.0;
  double remove = 0.0;
};

enum class KeyDistribution : std::uint8_t { kUniform, kZipfian };

struct WorkloadSpec {
  std::string name = "custom";
  OpMix mix;
  std::size_t threads = 1;
  std::size_t prefill = 0;
  // Total operations across all threads; when zero, run for `duration_s`.
  std::size_t total_ops = 0;
  double duration_s = 1.0;
  double hotspot = 1.0;
  double range_fraction = 0.0;
  Key range_width = 100;
  KeyDistribution distribution = KeyDistribution::kUniform;
  double zipf_theta = 0.99;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument when the spec is inconsistent.
  void validate(std::size_t dataset_size) const;
};

// read-heavy, update-heavy, ycsb-a, ycsb-b, ycsb-c. Throws on unknown names.
WorkloadSpec workload_preset(std::string_view name);

// YCSB's Zipfian generator over ranks [0, n); rank 0 is the hottest.
class ZipfianGenerator {
 public:
  ZipfianGenerator(std::uint64_t n, double theta);
  std::uint64_t operator()(std::mt19937_64& rng) const;

 private:
  std::uint64_t n_;
  double theta_, alpha_, zetan_, eta_, half_pow_theta_;
};

// Dataset index range [begin, end) that all generated keys are drawn from.
struct HotspotWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

HotspotWindow hotspot_window(std::size_t dataset_size, double hotspot, std::uint64_t seed);

// Deterministic per-thread operation stream.
class OpStream {
 public:
  OpStream(std::span<const Key> dataset, const WorkloadSpec& spec, std::size_t thread);
  verify::Operation next();
  const HotspotWindow& window() const { return window_; }

 private:
  Key draw_key();

  std::span<const Key> dataset_;
  const WorkloadSpec& spec_;
  HotspotWindow window_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::unique_ptr<ZipfianGenerator> zipf_;
};

// A random subset of `prefill` dataset keys, sorted, with value = key.
std::vector<std::pair<Key, Value>> prefill_pairs(std::span<const Key> dataset, std::size_t prefill,
                                                 std::uint64_t seed);

struct ThroughputReport {
  std::size_t total_ops = 0;
  std::size_t searches = 0;
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  std::size_t ranges = 0;
  std::size_t search_hits = 0;
  double elapsed_s = 0.0;

  double mops() const { return elapsed_s > 0 ? static_cast<double>(total_ops) / elapsed_s / 1e6 : 0; }
};

ThroughputReport run_workload(Index& index, std::span<const Key> dataset, const WorkloadSpec& spec);

// Stable CSV schema; see README for the column meanings.
std::string csv_header();
std::string csv_row(const WorkloadSpec& spec, std::string_view dataset, std::size_t dataset_size,
                    const ThroughputReport& report);

}  // namespace lli::harness
