// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "histop/hist.hpp"
#include "histop/history_operator.hpp"
#include "histop/oracle.hpp"

namespace histop {

// Truncated operator S_M in basis coordinates: column j holds the coefficients
// of S e_{j-m}.  s0 carries the sampled present values (S e_{j-m})(0); the
// truncated series itself converges to the jump midpoint at tau = 0, so the
// stress decode must use these measured values rather than reconstruct there.
struct OperatorMatrix {
  Eigen::MatrixXd S;
  Eigen::VectorXd s0;
  BasisSpec basis;
  std::string provenance;
  double C_eff = 1.0;

  int M() const { return static_cast<int>(S.rows()); }
};

// Optimal (or Fourier-baseline) rank-N hereditary law: encoder directions Phi
// (M x N, orthonormal columns for kind "svd"), response modes Psi = S Phi with
// column norms equal to the singular values.
struct ReducedModel {
  int m = 0, M = 0, N = 0;
  double T = 1.0, lambda0 = 1.0, C_eff = 1.0;
  Eigen::VectorXd s;
  Eigen::VectorXd psi0;  // response-mode present values psi_k(0)
  Eigen::MatrixXd Phi, Psi;
  std::string kind = "svd";  // "svd" | "fourier"

  BasisSpec make_basis(int grid_n, QuadRule rule = QuadRule::simpson) const;
};

// Samples the oracle along the M basis histories (plus one step probe when the
// instantaneous modulus is not exposed) and projects the responses.
OperatorMatrix assemble_from_oracle(Oracle& oracle, const BasisSpec& b);

// Analytic S_M entries for the SLS: closed-form antiderivatives of
// exponential-times-trigonometric products, no quadrature.
OperatorMatrix assemble_closed_form(const SlsParams& p, const BasisSpec& b);

ReducedModel svd_truncate(const OperatorMatrix& S, int N);

// Sub-optimal baseline: S compressed to the span of the first N basis
// directions in the order 0, 1, -1, 2, -2, ...
ReducedModel fourier_truncate(const OperatorMatrix& S, int N);

// q = project(f); return reconstruct(Psi Phi^T q), the rank-N inelastic strain.
HistorySample apply_reduced(const ReducedModel& rm, const HistorySample& f,
                            const BasisSpec& b);

// Online internal-variable evaluation: at each t_i form the zero-padded
// history, encode the N variables q_k, and decode sigma(t_i) =
// C_eff (eps(t_i) - (S_{M,N} eps_{t_i})(0)).
Eigen::VectorXd predict_stress(const ReducedModel& rm, const StrainProgram& program,
                               QuadRule rule = QuadRule::simpson);

struct ErrorReport {
  double rank_error = 0.0;   // s_{N+1}, 0 if N = M
  double gibbs_width = 0.0;  // max(T/M, T/N)
  std::optional<double> sampling_term;
  std::string sampling_note;
};

ErrorReport error_report(const Eigen::VectorXd& s, int M, int N, double T,
                         std::optional<double> sampling_term = std::nullopt);

// Cyclic Jacobi eigensolve of a symmetric matrix; eigenvalues descending,
// eigenvectors as columns.  Deterministic and dependency-free.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigh(const Eigen::MatrixXd& A);

// Largest singular value via jacobi_eigh(A^T A).
double spectral_norm(const Eigen::MatrixXd& A);

}  // namespace histop
