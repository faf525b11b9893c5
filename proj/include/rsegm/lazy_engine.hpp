// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rsegm {

// Closed forms for the affine recursion z_{l+1} = (1-p) z_l + u between
// snapshot refreshes. With beta = 1 - p and a gap of g steps:
//   geometric_power(p, g)    = beta^g
//   geometric_sum(p, g)      = sum_{l<g} beta^l          = (1 - beta^g) / p
//   geometric_ramp_sum(p, g) = sum_{l<g} (1 - beta^l)/p  = (g - geometric_sum) / p
// The last one uses a series when p g is small, where the closed form cancels.
double geometric_power(double p, std::int64_t g);
double geometric_sum(double p, std::int64_t g);
double geometric_ramp_sum(double p, std::int64_t g);

// Just-in-time representation of the sEGM iterate for unconstrained problems
// between two snapshot refreshes. Each coordinate stores its value at the
// step it was last written plus the running sum of its earlier values; reads
// apply the closed-form drift for the elapsed gap, so a step that touches k
// coordinates costs O(k) regardless of the dimension.
//
// Step semantics: z_{t+1} = (1-p) z_t + u + delta, delta sparse.
class LazyIterateState {
 public:
  LazyIterateState() = default;
  LazyIterateState(double p, std::span<const double> z, std::span<const double> u);

  // Restart the period at z with drift u; t resets to 0.
  void refresh(std::span<const double> z, std::span<const double> u);

  double p() const { return p_; }
  std::int64_t steps() const { return t_; }
  std::size_t size() const { return val_.size(); }
  std::span<const double> drift() const { return u_; }

  // z_t[c]
  double read(std::size_t c) const;
  // z_{t+1/2}[c] = (1-p) z_t[c] + u[c]
  double read_half(std::size_t c) const { return (1.0 - p_) * read(c) + u_[c]; }

  // Advance one step. deltas lists (coordinate, value) with distinct
  // coordinates; they are added on top of the affine drift.
  void step(std::span<const std::pair<std::size_t, double>> deltas);

  // Dense z_t.
  std::vector<double> materialize() const;
  // Dense sum_{l<t} z_l.
  std::vector<double> period_sum() const;
  // Dense sum_{l<t} z_{l+1/2} = (1-p) period_sum + t u.
  std::vector<double> half_sum() const;

 private:
  // Catch coordinate c up to time t_: sum_ absorbs z_last..z_{t-1}.
  void settle(std::size_t c);

  double p_ = 1.0;
  std::int64_t t_ = 0;
  std::vector<double> u_;
  std::vector<double> val_;
  std::vector<std::int64_t> last_;
  std::vector<double> sum_;
};

}  // namespace rsegm
