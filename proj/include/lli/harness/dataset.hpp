#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lli/core.hpp"

namespace lli::harness {

enum class DatasetSource : std::uint8_t { kUniform, kNormal, kLognormal, kFile };

struct DatasetSpec {
  DatasetSource source = DatasetSource::kUniform;
  std::size_t size = 0;
  std::uint64_t seed = 1;
  std::string path;  // kFile only
};

// Default distribution parameters. All synthetic keys stay below 2^53 so that
// they convert to double exactly.
inline constexpr double kUniformMax = 281474976710656.0;  // 2^48
inline constexpr double kNormalMean = 140737488355328.0;  // 2^47
inline constexpr double kNormalStddev = 17592186044416.0;  // 2^44
inline constexpr double kLognormalMu = 0.0;
inline constexpr double kLognormalSigma = 2.0;
inline constexpr double kLognormalScale = 1e9;
inline constexpr double kSyntheticCeiling = 9007199254740991.0;  // 2^53 - 1

// Sorted, duplicate-free keys; deterministic under the seed. Synthetic sources
// keep drawing until `size` distinct keys exist. File sources return the file
// contents sorted and deduplicated (size is ignored).
std::vector<Key> generate_dataset(const DatasetSpec& spec);

// "uniform", "normal", "lognormal" or "file:PATH". Throws std::invalid_argument.
DatasetSpec parse_dataset_source(std::string_view text);

// Binary layout: little-endian u64 count, then count little-endian u64 keys.
// Throws std::runtime_error on a missing file, short header or short body.
std::vector<Key> read_sosd(const std::string& path);
void write_sosd(const std::string& path, std::span<const Key> keys);

// Standard normal CDF, used for lognormal fidelity checks.
double normal_cdf(double z);

}  // namespace lli::harness
