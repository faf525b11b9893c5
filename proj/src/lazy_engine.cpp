// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/lazy_engine.hpp"

#include <cmath>

#include "rsegm/errors.hpp"

namespace rsegm {

double geometric_power(double p, std::int64_t g) {
  if (g == 0) return 1.0;
  if (p >= 1.0) return 0.0;
  return std::exp(static_cast<double>(g) * std::log1p(-p));
}

double geometric_sum(double p, std::int64_t g) {
  if (g == 0) return 0.0;
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(g) * std::log1p(-p)) / p;
}

double geometric_ramp_sum(double p, std::int64_t g) {
  if (g <= 1) return 0.0;
  const double gd = static_cast<double>(g);
  if (p * gd >= 0.5) return (gd - geometric_sum(p, g)) / p;
  // sum_{k>=1} (-p)^{k-1} C(g, k+1); successive terms shrink by about p g / k.
  double binom = gd * (gd - 1.0) / 2.0;  // C(g, 2)
  double total = 0.0;
  double sign_power = 1.0;
  for (int k = 1; k < 200 && binom != 0.0; ++k) {
    const double term = sign_power * binom;
    total += term;
    if (std::abs(term) <= 1e-18 * std::abs(total)) break;
    binom *= (gd - static_cast<double>(k) - 1.0) / (static_cast<double>(k) + 2.0);
    sign_power *= -p;
  }
  return total;
}

LazyIterateState::LazyIterateState(double p, std::span<const double> z,
                                   std::span<const double> u)
    : p_(p) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("snapshot probability outside (0, 1]");
  refresh(z, u);
}

void LazyIterateState::refresh(std::span<const double> z,
                               std::span<const double> u) {
  if (z.size() != u.size()) throw StructuralError("drift does not match iterate");
  t_ = 0;
  u_.assign(u.begin(), u.end());
  val_.assign(z.begin(), z.end());
  last_.assign(z.size(), 0);
  sum_.assign(z.size(), 0.0);
}

double LazyIterateState::read(std::size_t c) const {
  const std::int64_t gap = t_ - last_[c];
  if (gap == 0) return val_[c];
  return geometric_power(p_, gap) * val_[c] + geometric_sum(p_, gap) * u_[c];
}

void LazyIterateState::settle(std::size_t c) {
  const std::int64_t gap = t_ - last_[c];
  if (gap == 0) return;
  const double now = geometric_power(p_, gap) * val_[c] + geometric_sum(p_, gap) * u_[c];
  sum_[c] += geometric_sum(p_, gap) * val_[c] + geometric_ramp_sum(p_, gap) * u_[c];
  val_[c] = now;
  last_[c] = t_;
}

void LazyIterateState::step(
    std::span<const std::pair<std::size_t, double>> deltas) {
  for (const auto& [c, d] : deltas) {
    settle(c);
    // z_t[c] joins the running sum; z_{t+1}[c] becomes the stored value.
    sum_[c] += val_[c];
    val_[c] = (1.0 - p_) * val_[c] + u_[c] + d;
    last_[c] = t_ + 1;
  }
  ++t_;
}

std::vector<double> LazyIterateState::materialize() const {
  std::vector<double> z(val_.size());
  for (std::size_t c = 0; c < z.size(); ++c) z[c] = read(c);
  return z;
}

std::vector<double> LazyIterateState::period_sum() const {
  std::vector<double> s(val_.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    const std::int64_t gap = t_ - last_[c];
    s[c] = sum_[c] + geometric_sum(p_, gap) * val_[c] +
           geometric_ramp_sum(p_, gap) * u_[c];
  }
  return s;
}

std::vector<double> LazyIterateState::half_sum() const {
  std::vector<double> s = period_sum();
  const double t = static_cast<double>(t_);
  for (std::size_t c = 0; c < s.size(); ++c) s[c] = (1.0 - p_) * s[c] + t * u_[c];
  return s;
}

}  // namespace rsegm
