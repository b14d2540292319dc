#include "lli/harness/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace lli::harness {

namespace {

template <class Draw>
std::vector<Key> draw_unique(std::size_t size, std::uint64_t seed, Draw draw) {
  std::mt19937_64 rng(seed);
  std::vector<Key> keys;
  keys.reserve(size);
  while (keys.size() < size) {
    const std::size_t missing = size - keys.size();
    for (std::size_t i = 0; i < missing; ++i) keys.push_back(draw(rng));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }
  return keys;
}

Key clamp_to_key(double x) {
  if (!(x > 0.0)) return 0;
  if (x >= kSyntheticCeiling) return static_cast<Key>(kSyntheticCeiling);
  return static_cast<Key>(std::llround(x));
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xff) << (8 * (7 - i));
  return out;
}

}  // namespace

std::vector<Key> generate_dataset(const DatasetSpec& spec) {
  switch (spec.source) {
    case DatasetSource::kUniform: {
      std::uniform_int_distribution<Key> d(0, static_cast<Key>(kUniformMax) - 1);
      return draw_unique(spec.size, spec.seed, [&](std::mt19937_64& r) { return d(r); });
    }
    case DatasetSource::kNormal: {
      std::normal_distribution<double> d(kNormalMean, kNormalStddev);
      return draw_unique(spec.size, spec.seed, [&](std::mt19937_64& r) { return clamp_to_key(d(r)); });
    }
    case DatasetSource::kLognormal: {
      std::lognormal_distribution<double> d(kLognormalMu, kLognormalSigma);
      return draw_unique(spec.size, spec.seed,
                         [&](std::mt19937_64& r) { return clamp_to_key(d(r) * kLognormalScale); });
    }
    case DatasetSource::kFile: {
      std::vector<Key> keys = read_sosd(spec.path);
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      return keys;
    }
  }
  return {};
}

DatasetSpec parse_dataset_source(std::string_view text) {
  DatasetSpec spec;
  if (text == "uniform") {
    spec.source = DatasetSource::kUniform;
  } else if (text == "normal") {
    spec.source = DatasetSource::kNormal;
  } else if (text == "lognormal") {
    spec.source = DatasetSource::kLognormal;
  } else if (text.starts_with("file:") && text.size() > 5) {
    spec.source = DatasetSource::kFile;
    spec.path = std::string(text.substr(5));
  } else {
    throw std::invalid_argument("unknown dataset '" + std::string(text) + "'");
  }
  return spec;
}

std::vector<Key> read_sosd(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file " + path);
  std::uint64_t count = 0;
  if (!in.read(reinterpret_cast<char*>(&count), sizeof count)) {
    throw std::runtime_error("dataset file " + path + ": missing 8-byte count header");
  }
  count = to_le(count);
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg());
  if (bytes < 8 || (bytes - 8) / 8 < count) {
    throw std::runtime_error("dataset file " + path + ": header claims " + std::to_string(count) +
                             " keys but body is " + std::to_string(bytes - 8) + " bytes");
  }
  in.seekg(8);
  std::vector<Key> keys(count);
  in.read(reinterpret_cast<char*>(keys.data()), static_cast<std::streamsize>(count * 8));
  for (Key& k : keys) k = to_le(k);
  return keys;
}

void write_sosd(const std::string& path, std::span<const Key> keys) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dataset file " + path);
  const std::uint64_t count = to_le(keys.size());
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (Key k : keys) {
    const std::uint64_t le = to_le(k);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace lli::harness
