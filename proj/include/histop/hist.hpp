// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>

namespace histop {

// A history sampled at the nodes of a uniform grid; index 0 is the present
// (tau = 0), the last index the distant past (tau = T).
using HistorySample = Eigen::VectorXd;

// Uniform grid tau_i = i T / n on [0, T].
struct TimeGrid {
  double T = 1.0;
  int n = 2000;

  TimeGrid() = default;
  TimeGrid(double duration, int intervals);

  double dt() const { return T / n; }
  double node(int i) const { return T * static_cast<double>(i) / n; }
  int size() const { return n + 1; }

  bool operator==(const TimeGrid& other) const;
};

// Exponential fading-memory weight w(tau) = e^{-lambda0 tau}; w(0) = 1 and the
// semigroup condition w(s) >= w(s-t) w(t) holds with equality.
struct WeightFn {
  double lambda0 = 1.0;
  double operator()(double tau) const { return std::exp(-lambda0 * tau); }
};

enum class QuadRule { trapezoid, simpson };

// Weight of node p in a composite rule over c uniform intervals of width h.
// Simpson rule uses a 3/8 block on the first three intervals when c is odd.
double segment_weight(int p, int c, double h, QuadRule rule);
Eigen::VectorXd segment_weights(int c, double h, QuadRule rule);

// Weighted history space H = L^2((0,T), w(tau) dtau) with nodal quadrature.
class HistorySpace {
 public:
  HistorySpace() : HistorySpace(TimeGrid{}, WeightFn{}) {}
  HistorySpace(TimeGrid grid, WeightFn weight, QuadRule rule = QuadRule::simpson);

  const TimeGrid& grid() const { return grid_; }
  const WeightFn& weight() const { return weight_; }
  QuadRule rule() const { return rule_; }

  // Unweighted quadrature weights; positive, sum to T.
  const Eigen::VectorXd& quad_weights() const { return quad_; }
  // quad_weights() .* w(tau_i)
  const Eigen::VectorXd& weighted_quad() const { return wquad_; }

 private:
  TimeGrid grid_;
  WeightFn weight_;
  QuadRule rule_;
  Eigen::VectorXd quad_, wquad_;
};

double inner_product(const HistorySample& f, const HistorySample& g,
                     const HistorySpace& sp);
double norm_h(const HistorySample& f, const HistorySpace& sp);

// Trig-exponential basis e_n, n in [-m, m], orthonormal in H.  Matrix column
// i (0-based) carries the signed index n = i - m.
struct BasisSpec {
  int m = 0;
  HistorySpace space;

  int size() const { return 2 * m + 1; }
  int signed_index(int col) const { return col - m; }
  int column(int n) const { return n + m; }
};

double basis_eval(int n, double tau, const BasisSpec& b);
HistorySample basis_samples(int n, const BasisSpec& b);

// Coordinates q_i = (f, e_{i-m})_H, i = 0..2m.
Eigen::VectorXd project(const HistorySample& f, const BasisSpec& b);
// Pointwise sum of q_i e_{i-m} on the grid.
HistorySample reconstruct(const Eigen::VectorXd& q, const BasisSpec& b);

// Checks w(0)=1, monotone decay and the semigroup condition on all grid pairs
// (tolerance 1e-12).  Accepts arbitrary tabulated weights.
bool check_admissible(const Eigen::VectorXd& w_samples, const TimeGrid& grid);
bool check_admissible(const WeightFn& w, const TimeGrid& grid);

QuadRule quad_rule_from_string(const std::string& name);
std::string to_string(QuadRule rule);

}  // namespace histop
