#include "lli/harness/workload.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lli::harness {

void WorkloadSpec::validate(std::size_t dataset_size) const {
  const double sum = mix.search + mix.insert + mix.remove;
  if (mix.search < 0 || mix.insert < 0 || mix.remove < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("operation mix must be non-negative and sum to 1");
  }
  if (!(hotspot > 0.0 && hotspot <= 1.0)) throw std::invalid_argument("hotspot must be in (0,1]");
  if (range_fraction < 0.0 || range_fraction > 1.0) {
    throw std::invalid_argument("range fraction must be in [0,1]");
  }
  if (threads == 0) throw std::invalid_argument("threads must be at least 1");
  if (prefill > dataset_size) throw std::invalid_argument("prefill exceeds dataset size");
  if (dataset_size == 0) throw std::invalid_argument("dataset is empty");
  if (total_ops == 0 && !(duration_s > 0.0)) {
    throw std::invalid_argument("need a positive op count or duration");
  }
  if (!(zipf_theta > 0.0 && zipf_theta < 1.0)) throw std::invalid_argument("zipf theta must be in (0,1)");
}

WorkloadSpec workload_preset(std::string_view name) {
  WorkloadSpec s;
  s.name = std::string(name);
  if (name == "read-heavy") {
    s.mix = {0.95, 0.03, 0.02};
  } else if (name == "update-heavy") {
    s.mix = {0.30, 0.50, 0.20};
  } else if (name == "ycsb-a") {
    s.mix = {0.50, 0.50, 0.0};
  } else if (name == "ycsb-b") {
    s.mix = {0.95, 0.05, 0.0};
  } else if (name == "ycsb-c") {
    s.mix = {1.0, 0.0, 0.0};
  } else if (name == "custom") {
  } else {
    throw std::invalid_argument("unknown workload '" + std::string(name) + "'");
  }
  if (name.starts_with("ycsb")) s.distribution = KeyDistribution::kZipfian;
  return s;
}

ZipfianGenerator::ZipfianGenerator(std::uint64_t n, double theta) : n_(std::max<std::uint64_t>(n, 1)), theta_(theta) {
  zetan_ = 0.0;
  for (std::uint64_t i = 1; i <= n_; ++i) zetan_ += 1.0 / std::pow(static_cast<double>(i), theta_);
  const double zeta2 = 1.0 + std::pow(0.5, theta_);
  alpha_ = 1.0 / (1.0 - theta_);
  half_pow_theta_ = std::pow(0.5, theta_);
  eta_ = n_ < 2 ? 0.0
                : (1.0 - std::pow(2.0 / static_cast<double>(n_), 1.0 - theta_)) / (1.0 - zeta2 / zetan_);
}

std::uint64_t ZipfianGenerator::operator()(std::mt19937_64& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double uz = u * zetan_;
  if (uz < 1.0 || n_ == 1) return 0;
  if (uz < 1.0 + half_pow_theta_) return 1;
  const auto r = static_cast<std::uint64_t>(static_cast<double>(n_) * std::pow(eta_ * u - eta_ + 1.0, alpha_));
  return std::min(r, n_ - 1);
}

HotspotWindow hotspot_window(std::size_t dataset_size, double hotspot, std::uint64_t seed) {
  if (dataset_size == 0) return {};
  const auto span = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(hotspot * static_cast<double>(dataset_size))), 1, dataset_size);
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  const std::size_t begin = std::uniform_int_distribution<std::size_t>(0, dataset_size - span)(rng);
  return {begin, begin + span};
}

OpStream::OpStream(std::span<const Key> dataset, const WorkloadSpec& spec, std::size_t thread)
    : dataset_(dataset),
      spec_(spec),
      window_(hotspot_window(dataset.size(), spec.hotspot, spec.seed)),
      rng_(spec.seed * 0x9e3779b97f4a7c15ULL + thread + 1) {
  if (spec.distribution == KeyDistribution::kZipfian) {
    zipf_ = std::make_unique<ZipfianGenerator>(window_.end - window_.begin, spec.zipf_theta);
  }
}

Key OpStream::draw_key() {
  const std::size_t width = window_.end - window_.begin;
  std::size_t offset = 0;
  if (zipf_) {
    offset = (*zipf_)(rng_);
  } else {
    offset = std::uniform_int_distribution<std::size_t>(0, width - 1)(rng_);
  }
  return dataset_[window_.begin + offset];
}

verify::Operation OpStream::next() {
  const Key k = draw_key();
  if (spec_.range_fraction > 0.0 && unit_(rng_) < spec_.range_fraction) {
    return verify::Operation::range(k, spec_.range_width);
  }
  const double u = unit_(rng_);
  if (u < spec_.mix.search) return verify::Operation::search(k);
  if (u < spec_.mix.search + spec_.mix.insert) return verify::Operation::insert(k, k);
  return verify::Operation::remove(k);
}

std::vector<std::pair<Key, Value>> prefill_pairs(std::span<const Key> dataset, std::size_t prefill,
                                                 std::uint64_t seed) {
  std::vector<Key> keys(dataset.begin(), dataset.end());
  std::mt19937_64 rng(seed ^ 0xc2b2ae35ULL);
  prefill = std::min(prefill, keys.size());
  // Partial Fisher-Yates: the first `prefill` slots become the sample.
  for (std::size_t i = 0; i < prefill; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, keys.size() - 1)(rng);
    std::swap(keys[i], keys[j]);
  }
  keys.resize(prefill);
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<Key, Value>> out;
  out.reserve(prefill);
  for (Key k : keys) out.emplace_back(k, k);
  return out;
}

ThroughputReport run_workload(Index& index, std::span<const Key> dataset, const WorkloadSpec& spec) {
  spec.validate(dataset.size());
  using Clock = std::chrono::steady_clock;
  std::vector<ThroughputReport> per(spec.threads);
  std::atomic<bool> go{false};
  std::atomic<std::size_t> ready{0};
  Clock::time_point deadline;

  auto worker = [&](std::size_t t) {
    OpStream stream(dataset, spec, t);
    ThroughputReport& r = per[t];
    const std::size_t quota = spec.total_ops == 0
                                  ? 0
                                  : spec.total_ops / spec.threads + (t < spec.total_ops % spec.threads);
    ready.fetch_add(1);
    while (!go.load(std::memory_order_acquire)) std::this_thread::yield();
    for (std::size_t i = 0;; ++i) {
      if (spec.total_ops != 0) {
        if (i >= quota) break;
      } else if ((i & 255) == 0 && Clock::now() >= deadline) {
        break;
      }
      const verify::Operation op = stream.next();
      switch (op.kind) {
        case verify::OpKind::kSearch:
          ++r.searches;
          if (index.search(op.key)) ++r.search_hits;
          break;
        case verify::OpKind::kInsert:
          ++r.inserts;
          index.insert(op.key, op.arg);
          break;
        case verify::OpKind::kDelete:
          ++r.deletes;
          index.remove(op.key);
          break;
        case verify::OpKind::kRange:
          ++r.ranges;
          index.range(op.key, op.arg);
          break;
      }
      ++r.total_ops;
    }
  };

  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < spec.threads; ++t) threads.emplace_back(worker, t);
  while (ready.load() < spec.threads) std::this_thread::yield();
  const auto start = Clock::now();
  deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(spec.duration_s));
  go.store(true, std::memory_order_release);
  for (auto& th : threads) th.join();
  const auto stop = Clock::now();

  ThroughputReport total;
  for (const auto& r : per) {
    total.total_ops += r.total_ops;
    total.searches += r.searches;
    total.inserts += r.inserts;
    total.deletes += r.deletes;
    total.ranges += r.ranges;
    total.search_hits += r.search_hits;
  }
  total.elapsed_s = std::chrono::duration<double>(stop - start).count();
  return total;
}

std::string csv_header() {
  return "workload,dataset,size,prefill,threads,hotspot,range_frac,range_width,distribution,seed,"
         "ops,searches,inserts,deletes,ranges,search_hits,elapsed_s,mops";
}

std::string csv_row(const WorkloadSpec& spec, std::string_view dataset, std::size_t dataset_size,
                    const ThroughputReport& r) {
  std::ostringstream os;
  os << spec.name << ',' << dataset << ',' << dataset_size << ',' << spec.prefill << ',' << spec.threads
     << ',' << spec.hotspot << ',' << spec.range_fraction << ',' << spec.range_width << ','
     << (spec.distribution == KeyDistribution::kZipfian ? "zipfian" : "uniform") << ',' << spec.seed
     << ',' << r.total_ops << ',' << r.searches << ',' << r.inserts << ',' << r.deletes << ','
     << r.ranges << ',' << r.search_hits << ',' << r.elapsed_s << ',' << r.mops();
  return os.str();
}

}  // namespace lli::harness
