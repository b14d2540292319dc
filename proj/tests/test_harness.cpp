#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "lli/harness/dataset.hpp"
#include "lli/harness/workload.hpp"

using namespace lli;
using namespace lli::harness;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("synthetic datasets are sorted, unique and reproducible") {
    for (DatasetSource src : {DatasetSource::kUniform, DatasetSource::kNormal, DatasetSource::kLognormal}) {
      const auto a = generate_dataset({src, 100'000, 42, {}});
      const auto b = generate_dataset({src, 100'000, 42, {}});
      const auto c = generate_dataset({src, 100'000, 43, {}});
      CHECK(a.size() == 100'000);
      CHECK(a == b);
      CHECK(a != c);
      CHECK(std::adjacent_find(a.begin(), a.end(), std::greater_equal<Key>()) == a.end());
      CHECK(static_cast<double>(a.back()) <= kSyntheticCeiling);
      CHECK(generate_dataset({src, 0, 42, {}}).empty());
    }
  }

  TEST_CASE("normal keys centre on the configured mean") {
    const auto keys = generate_dataset({DatasetSource::kNormal, 100'000, 5, {}});
    double mean = 0;
    for (Key k : keys) mean += static_cast<double>(k);
    mean /= static_cast<double>(keys.size());
    // Standard error of the mean is sd / sqrt(n), about 5.6e10.
    CHECK(std::fabs(mean - kNormalMean) < 5 * kNormalStddev / std::sqrt(1e5));
  }

  TEST_CASE("lognormal keys follow the target CDF") {
    const auto keys = generate_dataset({DatasetSource::kLognormal, 1'000'000, 9, {}});
    const double n = static_cast<double>(keys.size());
    double d = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const double x = static_cast<double>(keys[i]);
      const double f = normal_cdf((std::log(x / kLognormalScale) - kLognormalMu) / kLognormalSigma);
      d = std::max({d, std::fabs(f - static_cast<double>(i) / n), std::fabs(f - static_cast<double>(i + 1) / n)});
    }
    CHECK(d < 0.01);
  }

  TEST_CASE("normal_cdf reference points") {
    CHECK(normal_cdf(0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
    CHECK(normal_cdf(-1) == doctest::Approx(0.1586553).epsilon(1e-6));
  }

  TEST_CASE("dataset files round-trip and reject malformed input") {
    const std::string path = temp_path("lli_roundtrip.bin");
    const std::vector<Key> keys{9, 1, 5, 5, kMaxKey};
    write_sosd(path, keys);
    CHECK(std::filesystem::file_size(path) == 8 + 8 * keys.size());
    CHECK(read_sosd(path) == keys);
    DatasetSpec spec = parse_dataset_source("file:" + path);
    CHECK(spec.source == DatasetSource::kFile);
    CHECK(generate_dataset(spec) == std::vector<Key>{1, 5, 9, kMaxKey});

    {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      f.write("\x01\x02\x03", 3);
    }
    CHECK_THROWS_AS(read_sosd(path), std::runtime_error);
    {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      const std::uint64_t count = 4;
      f.write(reinterpret_cast<const char*>(&count), 8);
      f.write(reinterpret_cast<const char*>(&count), 8);
    }
    CHECK_THROWS_AS(read_sosd(path), std::runtime_error);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_sosd(path), std::runtime_error);
  }

  TEST_CASE("dataset source names") {
    CHECK(parse_dataset_source("uniform").source == DatasetSource::kUniform);
    CHECK(parse_dataset_source("normal").source == DatasetSource::kNormal);
    CHECK(parse_dataset_source("lognormal").source == DatasetSource::kLognormal);
    CHECK(parse_dataset_source("file:/x/y").path == "/x/y");
    for (const char* bad : {"", "file:", "zipf", "Uniform"}) {
      CHECK_THROWS_AS(parse_dataset_source(bad), std::invalid_argument);
    }
  }

  TEST_CASE("presets and validation") {
    CHECK(workload_preset("read-heavy").mix.search == 0.95);
    CHECK(workload_preset("update-heavy").mix.insert == 0.50);
    CHECK(workload_preset("update-heavy").mix.remove == 0.20);
    CHECK(workload_preset("ycsb-a").distribution == KeyDistribution::kZipfian);
    CHECK(workload_preset("ycsb-c").mix.search == 1.0);
    CHECK_THROWS_AS(workload_preset("ycsb-z"), std::invalid_argument);
    for (const char* name : {"read-heavy", "update-heavy", "ycsb-a", "ycsb-b", "ycsb-c"}) {
      CHECK_NOTHROW(workload_preset(name).validate(10));
    }

    WorkloadSpec s;
    s.mix = {0.5, 0.5, 0.1};
    CHECK_THROWS_AS(s.validate(10), std::invalid_argument);
    s.mix = {0.5, 0.5, 0.0};
    s.hotspot = 0.0;
    CHECK_THROWS_AS(s.validate(10), std::invalid_argument);
    s.hotspot = 1.0;
    s.prefill = 11;
    CHECK_THROWS_AS(s.validate(10), std::invalid_argument);
    s.prefill = 10;
    s.threads = 0;
    CHECK_THROWS_AS(s.validate(10), std::invalid_argument);
    s.threads = 1;
    CHECK_NOTHROW(s.validate(10));
  }

  TEST_CASE("hotspot windows confine generated keys") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 10'000, 1, {}});
    WorkloadSpec spec = workload_preset("update-heavy");
    spec.hotspot = 0.1;
    spec.range_fraction = 0.1;
    const HotspotWindow w = hotspot_window(dataset.size(), 0.1, spec.seed);
    CHECK(w.end - w.begin == 1000);
    for (std::size_t t = 0; t < 3; ++t) {
      OpStream stream(dataset, spec, t);
      CHECK(stream.window().begin == w.begin);
      for (int i = 0; i < 20'000; ++i) {
        const auto op = stream.next();
        CHECK(op.key >= dataset[w.begin]);
        CHECK(op.key <= dataset[w.end - 1]);
      }
    }
    CHECK(hotspot_window(10, 1.0, 3).begin == 0);
    CHECK(hotspot_window(10, 1.0, 3).end == 10);
    CHECK(hotspot_window(10, 0.01, 3).end - hotspot_window(10, 0.01, 3).begin == 1);
  }

  TEST_CASE("operation streams are per-thread deterministic") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 1000, 1, {}});
    WorkloadSpec spec = workload_preset("ycsb-a");
    auto draw = [&](std::size_t thread) {
      OpStream s(dataset, spec, thread);
      std::vector<verify::Operation> ops;
      for (int i = 0; i < 500; ++i) ops.push_back(s.next());
      return ops;
    };
    CHECK(draw(0) == draw(0));
    CHECK(draw(1) == draw(1));
    CHECK(draw(0) != draw(1));
  }

  TEST_CASE("zipfian ranks follow the generalized harmonic law") {
    constexpr std::uint64_t n = 1000;
    const double theta = 0.99;
    ZipfianGenerator z(n, theta);
    std::mt19937_64 rng(4);
    std::vector<std::size_t> hits(n);
    constexpr int kDraws = 400'000;
    for (int i = 0; i < kDraws; ++i) {
      const auto r = z(rng);
      REQUIRE(r < n);
      ++hits[r];
    }
    double zeta = 0;
    for (std::uint64_t i = 1; i <= n; ++i) zeta += 1.0 / std::pow(static_cast<double>(i), theta);
    for (std::uint64_t r : {0, 1}) {
      const double want = 1.0 / std::pow(static_cast<double>(r + 1), theta) / zeta;
      CHECK(static_cast<double>(hits[r]) / kDraws == doctest::Approx(want).epsilon(0.03));
    }
    CHECK(hits[0] > hits[10]);
    CHECK(hits[10] > hits[500]);
    ZipfianGenerator one(1, theta);
    CHECK(one(rng) == 0);
  }

  TEST_CASE("prefill samples a sorted subset with value = key") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 5000, 2, {}});
    const auto p = prefill_pairs(dataset, 1000, 7);
    CHECK(p.size() == 1000);
    CHECK(p == prefill_pairs(dataset, 1000, 7));
    const std::set<Key> all(dataset.begin(), dataset.end());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i].first == p[i].second);
      CHECK(all.count(p[i].first) == 1);
      if (i > 0) CHECK(p[i].first > p[i - 1].first);
    }
    CHECK(prefill_pairs(dataset, 5000, 7).size() == 5000);
  }

  TEST_CASE("search-only workload on a fully prefilled index always hits") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 5000, 3, {}});
    WorkloadSpec spec = workload_preset("ycsb-c");
    spec.prefill = dataset.size();
    spec.total_ops = 20'000;
    Index index(prefill_pairs(dataset, spec.prefill, spec.seed));
    const ThroughputReport r = run_workload(index, dataset, spec);
    CHECK(r.total_ops == 20'000);
    CHECK(r.searches == 20'000);
    CHECK(r.search_hits == 20'000);
    CHECK(r.elapsed_s > 0);
  }

  TEST_CASE("read-heavy mix is realized within half a percent") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 20'000, 3, {}});
    WorkloadSpec spec = workload_preset("read-heavy");
    spec.prefill = 10'000;
    spec.threads = 2;
    spec.total_ops = 200'000;
    Index index(prefill_pairs(dataset, spec.prefill, spec.seed));
    const ThroughputReport r = run_workload(index, dataset, spec);
    const double n = static_cast<double>(r.total_ops);
    CHECK(r.total_ops == 200'000);
    CHECK(std::fabs(r.searches / n - 0.95) <= 0.005);
    CHECK(std::fabs(r.inserts / n - 0.03) <= 0.005);
    CHECK(std::fabs(r.deletes / n - 0.02) <= 0.005);
  }

  TEST_CASE("duration mode and range queries") {
    const auto dataset = generate_dataset({DatasetSource::kUniform, 5000, 3, {}});
    WorkloadSpec spec = workload_preset("update-heavy");
    spec.prefill = 2500;
    spec.threads = 2;
    spec.duration_s = 0.2;
    spec.range_fraction = 0.2;
    Index index(prefill_pairs(dataset, spec.prefill, spec.seed));
    const ThroughputReport r = run_workload(index, dataset, spec);
    CHECK(r.total_ops > 0);
    CHECK(r.ranges > 0);
    CHECK(r.elapsed_s >= 0.2);
    CHECK(r.searches + r.inserts + r.deletes + r.ranges == r.total_ops);
  }

  TEST_CASE("CSV header and rows have the same columns") {
    WorkloadSpec spec = workload_preset("read-heavy");
    ThroughputReport r;
    r.total_ops = 10;
    r.elapsed_s = 1;
    const std::string header = csv_header();
    const std::string row = csv_row(spec, "uniform", 100, r);
    CHECK(columns(header) == 18);
    CHECK(columns(row) == columns(header));
    CHECK(header.rfind("workload,dataset,size,prefill,threads,", 0) == 0);
    CHECK(row.rfind("read-heavy,uniform,100,", 0) == 0);
  }
}
