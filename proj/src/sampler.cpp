// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/sampler.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rsegm/errors.hpp"

namespace rsegm {

DiscreteSampler::DiscreteSampler(std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k];
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidDistributionError(
          fmt::format("weight {} at index {} is not a finite nonnegative number",
                      w, k));
    }
    if (w > 0.0) {
      support_.push_back(k);
      total += w;
    }
  }
  if (support_.empty()) {
    throw InvalidDistributionError("sampling weights have no positive entry");
  }

  probability_.assign(weights.size(), 0.0);
  for (std::size_t k : support_) probability_[k] = weights[k] / total;

  // Vose's construction over support slots.
  const std::size_t count = support_.size();
  acceptance_.assign(count, 1.0);
  alias_.resize(count);
  std::vector<double> scaled(count);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t s = 0; s < count; ++s) {
    alias_[s] = s;
    scaled[s] = probability_[support_[s]] * static_cast<double>(count);
    (scaled[s] < 1.0 ? small : large).push_back(s);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t lo = small.back();
    small.pop_back();
    const std::size_t hi = large.back();
    acceptance_[lo] = scaled[lo];
    alias_[lo] = hi;
    scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0;
    if (scaled[hi] < 1.0) {
      large.pop_back();
      small.push_back(hi);
    }
  }
  // Whatever remains is 1 up to rounding.
  for (std::size_t s : small) acceptance_[s] = 1.0;
  for (std::size_t s : large) acceptance_[s] = 1.0;
}

std::size_t DiscreteSampler::draw(RandomStream& rng) const {
  const auto slot = static_cast<std::size_t>(uniform_below(rng, support_.size()));
  const double u = uniform01(rng);
  return support_[u < acceptance_[slot] ? slot : alias_[slot]];
}

}  // namespace rsegm
