// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "histop/errors.hpp"
#include "histop/numeric.hpp"

namespace histop {

BasisSpec ReducedModel::make_basis(int grid_n, QuadRule rule) const {
  return BasisSpec{m, HistorySpace(TimeGrid(T, grid_n), WeightFn{lambda0}, rule)};
}

OperatorMatrix assemble_from_oracle(Oracle& oracle, const BasisSpec& b) {
  OperatorMatrix out;
  out.basis = b;
  out.provenance = oracle.id();
  out.C_eff = oracle.instantaneous_modulus();
  out.S.resize(b.size(), b.size());
  out.s0.resize(b.size());
  std::vector<HistorySample> responses;
  try {
    responses = sample_basis_responses(oracle, b);
  } catch (const std::exception& e) {
    throw oracle_error(std::string("assemble_from_oracle: ") + e.what());
  }
  for (int j = 0; j < b.size(); ++j) {
    try {
      out.S.col(j) = project(responses[j], b);
      out.s0(j) = responses[j](0);  // measured (S e_j)(0)
    } catch (const std::exception& e) {
      throw oracle_error("assemble_from_oracle: column j=" +
                         std::to_string(b.signed_index(j)) + ": " + e.what());
    }
  }
  return out;
}

OperatorMatrix assemble_closed_form(const SlsParams& p, const BasisSpec& b) {
  const double T = b.space.grid().T;
  if (std::abs(T - p.T) > 1e-12 ||
      std::abs(b.space.weight().lambda0 - p.lambda0) > 1e-12)
    throw std::invalid_argument("assemble_closed_form: basis space does not match params");
  const double k = p.k();
  const double alpha = p.alpha();
  const double x = alpha * T;
  const double B = numeric::phi1m(x);   // (1 - e^{-x})/x
  const double A2 = numeric::phi2m(x);  // (e^{-x} - 1 + x)/x^2
  const double c0 = std::sqrt(1.0 / T);
  const double cc = std::sqrt(2.0 / T);
  const double pi = std::numbers::pi;
  const int m = b.m;

  auto omega = [&](int idx) { return 2.0 * pi * std::abs(idx) / T; };
  auto amp = [&](int idx) { return idx == 0 ? c0 : cc; };

  OperatorMatrix out;
  out.basis = b;
  out.provenance = "sls-closed-form";
  out.C_eff = p.C0;
  out.S.resize(b.size(), b.size());
  out.s0.resize(b.size());

  // present values (S e_j)(0) = k c_j (F_j(T) - F_j(0))
  for (int col = 0; col < b.size(); ++col) {
    const int j = b.signed_index(col);
    const double wj = omega(j);
    const double Dj = alpha * alpha + wj * wj;
    if (j == 0)
      out.s0(col) = k * c0 * T * B;
    else if (j > 0)
      out.s0(col) = k * cc * wj * alpha * T * B / Dj;
    else
      out.s0(col) = k * cc * alpha * alpha * T * B / Dj;
  }

  for (int row = 0; row < b.size(); ++row) {
    const int i = b.signed_index(row);
    const double wi = omega(i);
    const double Di = alpha * alpha + wi * wi;
    for (int col = 0; col < b.size(); ++col) {
      const int j = b.signed_index(col);
      const double wj = omega(j);
      const double Dj = alpha * alpha + wj * wj;
      double val;
      if (i == 0 && j == 0) {
        val = k * T * A2;
      } else if (j == 0) {
        val = (i > 0 ? wi : -alpha) * k * amp(i) * c0 * T * B / Di;
      } else if (i == 0) {
        val = -(j > 0 ? wj : alpha) * k * c0 * amp(j) * T * B / Dj;
      } else {
        // boundary (rank-one) part F_j(T) G_i and the orthogonality part H_ij
        double fg;
        if (i > 0 && j > 0)
          fg = wi * wj * alpha * T * B / (Di * Dj);
        else if (i < 0 && j > 0)
          fg = -wj * alpha * alpha * T * B / (Di * Dj);
        else if (i > 0 && j < 0)
          fg = wi * alpha * alpha * T * B / (Di * Dj);
        else
          fg = -alpha * alpha * alpha * T * B / (Di * Dj);
        double hh = 0.0;
        if (std::abs(i) == std::abs(j)) {
          if (i > 0 && j > 0)
            hh = -alpha * (0.5 * T) / Dj;
          else if (i < 0 && j > 0)
            hh = -wj * (0.5 * T) / Dj;
          else if (i > 0 && j < 0)
            hh = wi * (0.5 * T) / Dj;
          else
            hh = -alpha * (0.5 * T) / Dj;
        }
        val = k * amp(i) * amp(j) * (fg - hh);
      }
      out.S(row, col) = val;
    }
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigh(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("jacobi_eigh: matrix not square");
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd M = 0.5 * (A + A.transpose());
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  const double thresh = 1e-14 * M.norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += M(p, q) * M(p, q);
    if (std::sqrt(2.0 * off) <= thresh) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = M(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (M(q, q) - M(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double mrp = M(r, p), mrq = M(r, q);
          M(r, p) = c * mrp - s * mrq;
          M(r, q) = s * mrp + c * mrq;
        }
        for (int r = 0; r < n; ++r) {
          const double mpr = M(p, r), mqr = M(q, r);
          M(p, r) = c * mpr - s * mqr;
          M(q, r) = s * mpr + c * mqr;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp - s * vrq;
          V(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  // sort descending; stable order keeps ties deterministic
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return M(a, a) > M(b, b); });
  Eigen::VectorXd vals(n);
  Eigen::MatrixXd vecs(n, n);
  for (int i = 0; i < n; ++i) {
    vals(i) = M(idx[i], idx[i]);
    vecs.col(i) = V.col(idx[i]);
  }
  return {vals, vecs};
}

double spectral_norm(const Eigen::MatrixXd& A) {
  const auto [vals, vecs] = jacobi_eigh(A.transpose() * A);
  return std::sqrt(std::max(0.0, vals(0)));
}

namespace {

void fix_column_signs(Eigen::MatrixXd& Phi) {
  for (int k = 0; k < Phi.cols(); ++k) {
    int imax = 0;
    double best = std::abs(Phi(0, k));
    for (int i = 1; i < Phi.rows(); ++i) {
      if (std::abs(Phi(i, k)) > best) {
        best = std::abs(Phi(i, k));
        imax = i;
      }
    }
    if (Phi(imax, k) < 0.0) Phi.col(k) = -Phi.col(k);
  }
}

ReducedModel model_shell(const OperatorMatrix& S, int N, std::string kind) {
  ReducedModel rm;
  rm.m = S.basis.m;
  rm.M = S.M();
  rm.N = N;
  rm.T = S.basis.space.grid().T;
  rm.lambda0 = S.basis.space.weight().lambda0;
  rm.C_eff = S.C_eff;
  rm.kind = std::move(kind);
  return rm;
}

}  // namespace

ReducedModel svd_truncate(const OperatorMatrix& S, int N) {
  if (N < 1 || N > S.M()) throw std::out_of_range("svd_truncate: N out of range");
  auto [vals, vecs] = jacobi_eigh(S.S.transpose() * S.S);
  ReducedModel rm = model_shell(S, N, "svd");
  rm.s.resize(N);
  for (int k = 0; k < N; ++k) rm.s(k) = std::sqrt(std::max(0.0, vals(k)));
  rm.Phi = vecs.leftCols(N);
  fix_column_signs(rm.Phi);
  rm.Psi = S.S * rm.Phi;
  // psi_k(0) = (S phi_k)(0) from the measured column present values
  rm.psi0 = rm.Phi.transpose() * S.s0;
  return rm;
}

ReducedModel fourier_truncate(const OperatorMatrix& S, int N) {
  if (N < 1 || N > S.M()) throw std::out_of_range("fourier_truncate: N out of range");
  const int m = S.basis.m;
  // signed indices in the order 0, 1, -1, 2, -2, ...
  std::vector<int> cols;
  cols.push_back(m);
  for (int d = 1; d <= m && static_cast<int>(cols.size()) < N; ++d) {
    cols.push_back(m + d);
    if (static_cast<int>(cols.size()) < N) cols.push_back(m - d);
  }
  ReducedModel rm = model_shell(S, N, "fourier");
  rm.Phi = Eigen::MatrixXd::Zero(S.M(), N);
  for (int k = 0; k < N; ++k) rm.Phi(cols[k], k) = 1.0;
  // restrict and project: S_N = P S P with P = Phi Phi^T
  rm.Psi = rm.Phi * (rm.Phi.transpose() * S.S * rm.Phi);
  rm.s.resize(N);
  for (int k = 0; k < N; ++k) rm.s(k) = rm.Psi.col(k).norm();
  // the encoder directions are basis columns, so the measured present values
  // decode this model the same way
  rm.psi0 = rm.Phi.transpose() * S.s0;
  return rm;
}

HistorySample apply_reduced(const ReducedModel& rm, const HistorySample& f,
                            const BasisSpec& b) {
  if (b.m != rm.m || std::abs(b.space.grid().T - rm.T) > 1e-12 ||
      std::abs(b.space.weight().lambda0 - rm.lambda0) > 1e-12)
    throw std::invalid_argument("apply_reduced: basis incompatible with model");
  const Eigen::VectorXd q = project(f, b);
  const Eigen::VectorXd p = rm.Psi * (rm.Phi.transpose() * q);
  return reconstruct(p, b);
}

Eigen::VectorXd predict_stress(const ReducedModel& rm, const StrainProgram& program,
                               QuadRule rule) {
  if (std::abs(program.grid.T - rm.T) > 1e-12)
    throw std::invalid_argument("predict_stress: program duration does not match model");
  const BasisSpec b = rm.make_basis(program.grid.n, rule);
  Eigen::VectorXd sigma(program.grid.size());
  for (int i = 0; i < program.grid.size(); ++i) {
    const HistorySample h = history_at(program, i);
    const Eigen::VectorXd q = rm.Phi.transpose() * project(h, b);  // internal variables
    sigma(i) = rm.C_eff * (program.values(i) - rm.psi0.dot(q));
  }
  return sigma;
}

ErrorReport error_report(const Eigen::VectorXd& s, int M, int N, double T,
                         std::optional<double> sampling_term) {
  if (N < 1 || N > M) throw std::out_of_range("error_report: N out of range");
  if (N < M && s.size() <= N)
    throw std::invalid_argument("error_report: need the full spectrum to report s_{N+1}");
  ErrorReport rep;
  rep.rank_error = (N == M) ? 0.0 : s(N);  // s is 0-based, s(N) = s_{N+1}
  rep.gibbs_width = std::max(T / M, T / N);
  rep.sampling_term = sampling_term;
  rep.sampling_note = sampling_term
                          ? "|S - S_M| estimated from analytic reference"
                          : "unknown, vanishing in M";
  return rep;
}

}  // namespace histop
