// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/hist.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "histop/errors.hpp"

namespace histop {

TimeGrid::TimeGrid(double duration, int intervals) : T(duration), n(intervals) {
  if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: duration must be positive");
  if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 intervals");
}

bool TimeGrid::operator==(const TimeGrid& other) const {
  return n == other.n && T == other.T;
}

double segment_weight(int p, int c, double h, QuadRule rule) {
  if (p < 0 || p > c) throw std::out_of_range("segment_weight: node outside segment");
  if (c == 0) return 0.0;
  if (rule == QuadRule::trapezoid || c == 1)
    return (p == 0 || p == c) ? 0.5 * h : h;
  if (c % 2 == 0) {
    if (p == 0 || p == c) return h / 3.0;
    return (p % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  }
  if (c == 3) {
    return (p == 0 || p == 3) ? 3.0 * h / 8.0 : 9.0 * h / 8.0;
  }
  // odd c >= 5: 3/8 rule on the first three intervals, Simpson on the rest
  if (p < 3) return (p == 0) ? 3.0 * h / 8.0 : 9.0 * h / 8.0;
  if (p == 3) return 3.0 * h / 8.0 + h / 3.0;
  if (p == c) return h / 3.0;
  return ((p - 3) % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
}

Eigen::VectorXd segment_weights(int c, double h, QuadRule rule) {
  Eigen::VectorXd w(c + 1);
  for (int p = 0; p <= c; ++p) w(p) = segment_weight(p, c, h, rule);
  return w;
}

HistorySpace::HistorySpace(TimeGrid grid, WeightFn weight, QuadRule rule)
    : grid_(grid), weight_(weight), rule_(rule) {
  if (!(weight_.lambda0 >= 0.0))
    throw std::invalid_argument("HistorySpace: lambda0 must be nonnegative");
  quad_ = segment_weights(grid_.n, grid_.dt(), rule_);
  wquad_.resize(quad_.size());
  for (int i = 0; i < quad_.size(); ++i) wquad_(i) = quad_(i) * weight_(grid_.node(i));
}

double inner_product(const HistorySample& f, const HistorySample& g,
                     const HistorySpace& sp) {
  if (f.size() != sp.grid().size() || g.size() != sp.grid().size())
    throw std::invalid_argument("inner_product: sample does not match grid");
  return (f.array() * g.array() * sp.weighted_quad().array()).sum();
}

double norm_h(const HistorySample& f, const HistorySpace& sp) {
  return std::sqrt(std::max(0.0, inner_product(f, f, sp)));
}

double basis_eval(int n, double tau, const BasisSpec& b) {
  if (std::abs(n) > b.m) throw std::out_of_range("basis_eval: |n| exceeds half-width m");
  const double T = b.space.grid().T;
  const double ex = std::exp(0.5 * b.space.weight().lambda0 * tau);
  if (n == 0) return std::sqrt(1.0 / T) * ex;
  const double arg = 2.0 * std::numbers::pi * std::abs(n) * tau / T;
  const double amp = std::sqrt(2.0 / T) * ex;
  return n > 0 ? amp * std::sin(arg) : amp * std::cos(arg);
}

HistorySample basis_samples(int n, const BasisSpec& b) {
  const TimeGrid& g = b.space.grid();
  HistorySample out(g.size());
  for (int i = 0; i < g.size(); ++i) out(i) = basis_eval(n, g.node(i), b);
  return out;
}

Eigen::VectorXd project(const HistorySample& f, const BasisSpec& b) {
  if (f.size() != b.space.grid().size())
    throw std::invalid_argument("project: sample does not match grid");
  Eigen::VectorXd q(b.size());
  for (int i = 0; i < b.size(); ++i)
    q(i) = inner_product(f, basis_samples(b.signed_index(i), b), b.space);
  return q;
}

HistorySample reconstruct(const Eigen::VectorXd& q, const BasisSpec& b) {
  if (q.size() != b.size())
    throw std::invalid_argument("reconstruct: coefficient vector has wrong length");
  HistorySample out = HistorySample::Zero(b.space.grid().size());
  for (int i = 0; i < b.size(); ++i)
    out += q(i) * basis_samples(b.signed_index(i), b);
  return out;
}

bool check_admissible(const Eigen::VectorXd& w, const TimeGrid& grid) {
  if (w.size() != grid.size())
    throw std::invalid_argument("check_admissible: samples do not match grid");
  constexpr double tol = 1e-12;
  if (std::abs(w(0) - 1.0) > tol) return false;
  for (int i = 0; i + 1 < w.size(); ++i)
    if (w(i + 1) > w(i) + tol) return false;
  // semigroup on grid pairs: s = tau_i, t = tau_j, s - t = tau_{i-j}
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j <= i; ++j)
      if (w(i) < w(i - j) * w(j) - tol) return false;
  return true;
}

bool check_admissible(const WeightFn& w, const TimeGrid& grid) {
  Eigen::VectorXd samples(grid.size());
  for (int i = 0; i < grid.size(); ++i) samples(i) = w(grid.node(i));
  return check_admissible(samples, grid);
}

QuadRule quad_rule_from_string(const std::string& name) {
  if (name == "simpson") return QuadRule::simpson;
  if (name == "trapezoid") return QuadRule::trapezoid;
  throw config_error("unknown quadrature rule '" + name + "'");
}

std::string to_string(QuadRule rule) {
  return rule == QuadRule::simpson ? "simpson" : "trapezoid";
}

}  // namespace histop
