#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lli/harness/acceptance.hpp"
#include "lli/harness/dataset.hpp"
#include "lli/harness/workload.hpp"
#include "lli/verify/checker.hpp"
#include "lli/verify/history.hpp"

namespace {

using namespace lli;
using namespace lli::harness;

struct BenchArgs {
  std::string workload = "read-heavy";
  std::string mix;
  std::string dataset = "uniform";
  std::string distribution;
  std::string out;
  std::size_t threads = 1;
  std::size_t size = 1'000'000;
  std::size_t prefill = 0;
  bool prefill_set = false;
  std::size_t ops = 0;
  double duration = 1.0;
  double hotspot = 1.0;
  double range_frac = 0.0;
  Key range_width = 100;
  std::uint64_t seed = 1;
  IndexConfig config;
};

OpMix parse_mix(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad --mix component '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw std::invalid_argument("--mix needs three fractions s,i,d");
  return {parts[0], parts[1], parts[2]};
}

int run_bench(const BenchArgs& a) {
  WorkloadSpec spec = workload_preset(a.workload);
  if (!a.mix.empty()) {
    spec.mix = parse_mix(a.mix);
    if (a.workload != "custom") spec.name = a.workload + "+mix";
  } else if (a.workload == "custom") {
    throw std::invalid_argument("--workload custom requires --mix");
  }
  if (a.distribution == "zipfian") {
    spec.distribution = KeyDistribution::kZipfian;
  } else if (a.distribution == "uniform") {
    spec.distribution = KeyDistribution::kUniform;
  }
  spec.threads = a.threads;
  spec.total_ops = a.ops;
  spec.duration_s = a.duration;
  spec.hotspot = a.hotspot;
  spec.range_fraction = a.range_frac;
  spec.range_width = a.range_width;
  spec.seed = a.seed;

  DatasetSpec ds = parse_dataset_source(a.dataset);
  ds.size = a.size;
  ds.seed = a.seed;
  const std::vector<Key> dataset = generate_dataset(ds);
  spec.prefill = a.prefill_set ? a.prefill : dataset.size() / 2;
  spec.validate(dataset.size());

  Index index(prefill_pairs(dataset, spec.prefill, spec.seed), a.config);
  const ThroughputReport report = run_workload(index, dataset, spec);

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  os << csv_header() << '\n' << csv_row(spec, a.dataset, dataset.size(), report) << '\n';
  return 0;
}

int run_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << '\n';
    return 2;
  }
  verify::HistoryLog log;
  try {
    log = verify::read_history(in);
  } catch (const std::runtime_error& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return 2;
  }
  const auto verdict = verify::check_linearizable(log.events, log.initial);
  std::cout << verdict.describe(log.events);
  return verdict.linearizable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned lock-free index: benchmark, acceptance suite and history replay"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  BenchArgs b;
  auto* bench = app.add_subcommand("bench", "Run one timed workload and emit a CSV row");
  bench->add_option("--workload", b.workload, "read-heavy|update-heavy|ycsb-a|ycsb-b|ycsb-c|custom")
      ->check(CLI::IsMember({"read-heavy", "update-heavy", "ycsb-a", "ycsb-b", "ycsb-c", "custom"}));
  bench->add_option("--mix", b.mix, "search,insert,delete fractions summing to 1");
  bench->add_option("--threads", b.threads, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--size", b.size, "dataset size (synthetic sources)");
  bench->add_option("--prefill", b.prefill, "keys loaded before timing (default size/2)")
      ->each([&](const std::string&) { b.prefill_set = true; });
  bench->add_option("--ops", b.ops, "total operations; overrides --duration");
  bench->add_option("--duration", b.duration, "seconds to run when --ops is not given");
  bench->add_option("--hotspot", b.hotspot, "fraction of the key space queried, in (0,1]");
  bench->add_option("--range-frac", b.range_frac, "fraction of operations that are range queries");
  bench->add_option("--range-width", b.range_width, "key width of range queries");
  bench->add_option("--dataset", b.dataset, "uniform|normal|lognormal|file:PATH");
  bench->add_option("--distribution", b.distribution, "key choice: uniform|zipfian (default by preset)")
      ->check(CLI::IsMember({"uniform", "zipfian"}));
  bench->add_option("--seed", b.seed, "seed for dataset and operation streams");
  bench->add_option("--olb-threshold", b.config.olb_threshold, "one-level bin capacity")
      ->check(CLI::PositiveNumber);
  bench->add_option("--tlb-threshold", b.config.tlb_threshold, "two-level bin capacity")
      ->check(CLI::PositiveNumber);
  bench->add_option("--fanout", b.config.fanout, "one-level bins per two-level bin")
      ->check(CLI::PositiveNumber);
  bench->add_option("--eps", b.config.root_eps, "root segment error target")->check(CLI::PositiveNumber);
  bench->add_option("--out", b.out, "CSV output path (default stdout)");

  std::vector<int> only;
  std::string corpus = LLI_DEFAULT_CORPUS;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
  verify_cmd->add_option("--only", only, "criterion numbers to run (default all)")
      ->check(CLI::Range(1, 9));
  verify_cmd->add_option("--corpus", corpus, "directory of planted-violation .log files");

  std::string log_path;
  auto* replay = app.add_subcommand("replay", "Check a recorded history log for linearizability");
  replay->add_option("log", log_path, "history log file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) return run_bench(b);
    if (verify_cmd->parsed()) {
      AcceptanceOptions opts;
      opts.only.insert(only.begin(), only.end());
      opts.corpus_dir = corpus;
      return all_passed(run_acceptance(opts, std::cout)) ? 0 : 1;
    }
    if (replay->parsed()) return run_replay(log_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
