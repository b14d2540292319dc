#include "lli/models.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace lli {

Model fit_coefficients(std::span<const Key> keys) {
  const std::size_t n = keys.size();
  if (n < 2) return {};
  // Accumulate over keys shifted by the first key so that the normal
  // equations stay well conditioned for large absolute key values.
  const Key origin = keys.front();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(keys[i] - origin);
    const double y = static_cast<double>(i);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) return {};
  Model m;
  m.a = (dn * sxy - sx * sy) / denom;
  const double centred_b = (sy - m.a * sx) / dn;
  m.b = centred_b - m.a * static_cast<double>(origin);
  return m;
}

std::size_t predict(const Model& m, Key key, std::size_t len) {
  assert(len > 0);
  const double v = std::floor(m.a * static_cast<double>(key) + m.b + 0.5);
  if (!(v > 0.0)) return 0;  // also catches NaN
  const double hi = static_cast<double>(len - 1);
  if (v >= hi) return len - 1;
  return static_cast<std::size_t>(v);
}

double max_residual(const Model& m, std::span<const Key> keys) {
  double eps = 0.0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double rank = static_cast<double>(i);
    const double line = m.a * static_cast<double>(keys[i]) + m.b;
    const double rounded = static_cast<double>(predict(m, keys[i], keys.size()));
    eps = std::max({eps, std::abs(line - rank), std::abs(rounded - rank)});
  }
  return eps;
}

Model fit_linear(std::span<const Key> keys) {
  Model m = fit_coefficients(keys);
  m.eps = max_residual(m, keys);
  return m;
}

PublishedFit::~PublishedFit() { delete slot_.load(); }

const Model& PublishedFit::help(std::span<const Key> keys) {
  auto mine = std::make_unique<Model>(fit_linear(keys));
  const Model* expected = nullptr;
  attempts_.fetch_add(1);
  if (slot_.compare_exchange_strong(expected, mine.get(), std::memory_order_acq_rel)) {
    wins_.fetch_add(1);
    return *mine.release();
  }
  return *expected;
}

Model fit_linear_published(std::span<const Key> keys, std::size_t helpers) {
  PublishedFit slot;
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < helpers; ++t) pool.emplace_back([&] { slot.help(keys); });
  Model result = slot.help(keys);
  for (auto& th : pool) th.join();
  return result;
}

std::vector<Segment> segment_root(std::span<const Key> keys, double eps_target) {
  assert(eps_target > 0);
  std::vector<Segment> out;
  const std::size_t n = keys.size();
  std::size_t start = 0;
  while (start < n) {
    const std::size_t rem = n - start;
    auto fits = [&](std::size_t len) {
      return max_residual(fit_coefficients(keys.subspan(start, len)), keys.subspan(start, len)) <=
             eps_target;
    };
    // Gallop the segment length until the refitted line breaks the bound,
    // then bisect between the last good and first bad length.
    std::size_t good = 1, bad = 0;
    for (std::size_t probe = 2; good < rem; probe *= 2) {
      const std::size_t len = std::min(probe, rem);
      if (!fits(len)) {
        bad = len;
        break;
      }
      good = len;
    }
    if (bad != 0) {
      std::size_t lo = good, hi = bad;
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (fits(mid) ? lo : hi) = mid;
      }
      good = lo;
    }
    const auto slice = keys.subspan(start, good);
    out.push_back({slice.front(), start, good, fit_linear(slice)});
    start += good;
  }
  return out;
}

namespace {

NodeSearch finish(std::span<const Key> keys, std::size_t pos, Key key) {
  if (pos < keys.size() && keys[pos] == key) return {static_cast<std::ptrdiff_t>(pos), true};
  return {static_cast<std::ptrdiff_t>(pos) - 1, false};
}

std::size_t lower_bound_in(std::span<const Key> keys, std::size_t lo, std::size_t hi, Key key) {
  return static_cast<std::size_t>(std::lower_bound(keys.begin() + lo, keys.begin() + hi, key) -
                                  keys.begin());
}

}  // namespace

NodeSearch search_segmented(std::span<const Key> keys, std::span<const Segment> segments, Key key) {
  if (keys.empty() || key < segments.front().start_key) return {-1, false};
  auto it = std::upper_bound(segments.begin(), segments.end(), key,
                             [](Key k, const Segment& s) { return k < s.start_key; });
  const Segment& seg = *std::prev(it);
  const std::size_t seg_lo = seg.start_index;
  const std::size_t seg_hi = seg.start_index + seg.length;  // exclusive

  const std::size_t guess = seg_lo + predict(seg.model, key, seg.length);
  const auto radius = static_cast<std::size_t>(std::ceil(seg.model.eps));
  const std::size_t w_lo = guess - std::min(radius, guess - seg_lo);
  const std::size_t w_hi = std::min(guess + radius + 1, seg_hi);

  std::size_t pos = lower_bound_in(keys, w_lo, w_hi, key);
  // Present keys are always inside the window; absent probes may land outside.
  if (pos == w_lo && w_lo > seg_lo && keys[w_lo - 1] >= key) {
    pos = lower_bound_in(keys, seg_lo, w_lo, key);
  } else if (pos == w_hi && w_hi < seg_hi) {
    pos = lower_bound_in(keys, w_hi, seg_hi, key);
  }
  return finish(keys, pos, key);
}

NodeSearch search_exponential(std::span<const Key> keys, const Model& model, Key key) {
  const std::size_t m = keys.size();
  if (m == 0) return {-1, false};
  const std::size_t p = predict(model, key, m);
  if (keys[p] == key) return {static_cast<std::ptrdiff_t>(p), true};

  std::size_t lo, hi;  // the lower bound lies in [lo, hi]
  if (keys[p] < key) {
    std::size_t below = p, step = 1;
    hi = p + step;
    while (hi < m && keys[hi] < key) {
      below = hi;
      step *= 2;
      hi = p + step;
    }
    lo = below + 1;
    hi = std::min(hi, m);
  } else {
    std::size_t above = p, step = 1;
    while (step <= p && keys[p - step] >= key) {
      above = p - step;
      step *= 2;
    }
    lo = step <= p ? p - step + 1 : 0;
    hi = above;
  }
  return finish(keys, lower_bound_in(keys, lo, hi, key), key);
}

}  // namespace lli
