// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsegm/random.hpp"

namespace rsegm {

// Weighted discrete distribution over {0, ..., size()-1} with O(1) draws
// (Walker/Vose alias table). Zero-weight items are excluded from the support
// and never drawn; draws always return original indices.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;

  // Throws InvalidDistributionError when no weight is strictly positive or
  // any weight is negative or non-finite.
  explicit DiscreteSampler(std::span<const double> weights);

  std::size_t size() const { return probability_.size(); }
  std::size_t support_size() const { return support_.size(); }

  // P(draw == index); zero outside the support.
  double probability(std::size_t index) const { return probability_[index]; }
  std::span<const double> probabilities() const { return probability_; }
  std::span<const std::size_t> support() const { return support_; }

  std::size_t draw(RandomStream& rng) const;

  // Alias table, indexed by support slot: slot k keeps itself with
  // probability acceptance()[k], else yields slot alias()[k].
  std::span<const double> acceptance() const { return acceptance_; }
  std::span<const std::size_t> alias() const { return alias_; }

 private:
  std::vector<double> probability_;
  std::vector<std::size_t> support_;
  std::vector<double> acceptance_;
  std::vector<std::size_t> alias_;
};

inline DiscreteSampler build_sampler(std::span<const double> weights) {
  return DiscreteSampler(weights);
}

}  // namespace rsegm
