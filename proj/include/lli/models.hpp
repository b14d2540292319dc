#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "lli/core.hpp"

namespace lli {

// rank ~= a * key + b, with every fitted key's true rank within eps of the
// prediction (both the real-valued line and the rounded prediction).
struct Model {
  double a = 0.0;
  double b = 0.0;
  double eps = 0.0;

  bool operator==(const Model&) const = default;
};

struct Segment {
  Key start_key = 0;
  std::size_t start_index = 0;
  std::size_t length = 0;
  Model model;  // fitted over local ranks 0..length-1
};

// Closed-form least squares of rank on key, plus the exact max residual.
Model fit_linear(std::span<const Key> keys);

// Slope and intercept only; eps is left at zero.
Model fit_coefficients(std::span<const Key> keys);

// Max over keys of both the real residual |a*k+b - i| and the integer residual
// of predict(); this is the eps stored in a Model.
double max_residual(const Model& m, std::span<const Key> keys);

// round-half-up(a*key + b) clamped to [0, len-1]; len must be positive.
std::size_t predict(const Model& m, Key key, std::size_t len);

// Write-once slot that many helpers race to fill with the same fit.
class PublishedFit {
 public:
  PublishedFit() = default;
  ~PublishedFit();
  PublishedFit(const PublishedFit&) = delete;
  PublishedFit& operator=(const PublishedFit&) = delete;

  // Computes fit_linear(keys) into private storage, tries to publish it with a
  // single CAS, and returns whichever model won.
  const Model& help(std::span<const Key> keys);

  const Model* published() const { return slot_.load(std::memory_order_acquire); }
  std::size_t publish_attempts() const { return attempts_.load(); }
  std::size_t publish_wins() const { return wins_.load(); }

 private:
  std::atomic<const Model*> slot_{nullptr};
  std::atomic<std::size_t> attempts_{0};
  std::atomic<std::size_t> wins_{0};
};

// Runs `helpers` threads (the caller counts as one) through a shared
// PublishedFit and returns the published model.
Model fit_linear_published(std::span<const Key> keys, std::size_t helpers);

std::vector<Segment> segment_root(std::span<const Key> keys, double eps_target);

struct NodeSearch {
  std::ptrdiff_t ix = -1;  // exact index if found, else greatest key < probe (-1 if none)
  bool found = false;

  bool operator==(const NodeSearch&) const = default;
};

// Segment lookup, model prediction, then binary search in the eps window.
NodeSearch search_segmented(std::span<const Key> keys, std::span<const Segment> segments, Key key);

// Model prediction followed by a galloping search outward.
NodeSearch search_exponential(std::span<const Key> keys, const Model& model, Key key);

}  // namespace lli
