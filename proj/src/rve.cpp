// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/rve.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "histop/errors.hpp"
#include "histop/numeric.hpp"

namespace histop {

double gamma_sample(double mean, double shape, std::mt19937_64& rng) {
  if (!(mean > 0.0) || !(shape > 0.0))
    throw std::invalid_argument("gamma_sample: mean and shape must be positive");
  const double scale = mean / shape;
  // Marsaglia-Tsang; shape < 1 boosted through Gamma(shape + 1)
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(numeric::uniform01(rng), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = numeric::normal01(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = numeric::uniform01(rng);
    if (u < 1.0 - 0.0331 * z * z * z * z) return boost * d * v * scale;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v)))
      return boost * d * v * scale;
  }
}

LaminateLayer layer_from_prony(const PronyKernel& kernel) {
  return {kernel.instantaneous(), kernel.branches};
}

RveModel build_laminate(const std::vector<LaminateLayer>& layers,
                        const std::vector<double>& fractions) {
  if (layers.empty()) throw std::invalid_argument("build_laminate: no materials");
  if (layers.size() != fractions.size())
    throw std::invalid_argument("build_laminate: layers and fractions differ in length");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw std::invalid_argument("build_laminate: fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("build_laminate: fractions must sum to 1");

  const int L = static_cast<int>(layers.size());
  RveModel model;
  model.n_comp = 1;
  model.n_dof = L - 1;  // interior interfaces; ends pinned by periodicity + gauge
  model.volume = 1.0;
  for (const auto& layer : layers) {
    RveMaterial mat;
    mat.C = Eigen::MatrixXd::Constant(1, 1, layer.modulus);
    mat.dir = Eigen::MatrixXd::Constant(1, 1, 1.0);
    mat.branches = layer.branches;
    model.materials.push_back(std::move(mat));
  }
  for (int l = 0; l < L; ++l) {
    RveElement e;
    e.w = fractions[l];
    e.material = l;
    e.B = Eigen::MatrixXd(1, 2);
    e.B << -1.0 / fractions[l], 1.0 / fractions[l];
    e.dofs = {l - 1, l == L - 1 ? -1 : l};
    model.elements.push_back(std::move(e));
  }
  return model;
}

namespace {

// trilinear hexahedron: corner order (0,0,0),(1,0,0),(1,1,0),(0,1,0), then z+1
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

Eigen::MatrixXd hex_b_matrix(double gx, double gy, double gz, double h) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, 24);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 8; ++a) {
    const double xa = 2.0 * kCorner[a][0] - 1.0;
    const double ya = 2.0 * kCorner[a][1] - 1.0;
    const double za = 2.0 * kCorner[a][2] - 1.0;
    const double dNdx = (2.0 / h) * xa * (1.0 + ya * gy) * (1.0 + za * gz) / 8.0;
    const double dNdy = (2.0 / h) * ya * (1.0 + xa * gx) * (1.0 + za * gz) / 8.0;
    const double dNdz = (2.0 / h) * za * (1.0 + xa * gx) * (1.0 + ya * gy) / 8.0;
    const int cx = 3 * a, cy = 3 * a + 1, cz = 3 * a + 2;
    B(0, cx) = dNdx;
    B(1, cy) = dNdy;
    B(2, cz) = dNdz;
    B(3, cy) = inv_sqrt2 * dNdz;
    B(3, cz) = inv_sqrt2 * dNdy;
    B(4, cx) = inv_sqrt2 * dNdz;
    B(4, cz) = inv_sqrt2 * dNdx;
    B(5, cx) = inv_sqrt2 * dNdy;
    B(5, cy) = inv_sqrt2 * dNdx;
  }
  return B;
}

}  // namespace

RveModel build_grain_cube(int grains_per_side, int elems_per_grain_side,
                          const GrainSampler& sampler) {
  if (grains_per_side < 1 || elems_per_grain_side < 1)
    throw std::invalid_argument("build_grain_cube: counts must be >= 1");
  const int G = grains_per_side;
  const int E = elems_per_grain_side;
  const int P = G * E;  // elements (and periodic nodes) per side
  const double h = 1.0 / P;

  RveModel model;
  model.n_comp = 6;
  model.n_dof = 3 * (P * P * P - 1);  // one node pinned (translation gauge)
  model.volume = 1.0;

  std::mt19937_64 rng(sampler.seed);
  for (int g = 0; g < G * G * G; ++g) {
    PronyKernel shear;
    shear.mu_inf = sampler.mu_inf;
    for (int b = 0; b < sampler.branches; ++b) {
      const double eta = gamma_sample(sampler.viscosity.mean, sampler.viscosity.shape, rng);
      const double tau = gamma_sample(sampler.reltime.mean, sampler.reltime.shape, rng);
      shear.branches.push_back({eta / tau, tau});
      model.sampled_parameters.emplace_back(eta, tau);
    }
    RveMaterial mat;
    mat.C = 3.0 * sampler.kappa * mandel_volumetric() +
            2.0 * shear.instantaneous() * mandel_deviatoric();
    mat.dir = 2.0 * mandel_deviatoric();
    mat.branches = shear.branches;
    model.materials.push_back(std::move(mat));
  }

  auto node_id = [P](int i, int j, int k) {
    return ((i % P) * P + (j % P)) * P + (k % P);
  };
  const double g1 = 1.0 / std::sqrt(3.0);
  const double wq = (h / 2.0) * (h / 2.0) * (h / 2.0);  // per Gauss point

  for (int ex = 0; ex < P; ++ex) {
    for (int ey = 0; ey < P; ++ey) {
      for (int ez = 0; ez < P; ++ez) {
        const int grain = ((ex / E) * G + (ey / E)) * G + (ez / E);
        std::vector<int> dofs(24);
        for (int a = 0; a < 8; ++a) {
          const int node = node_id(ex + kCorner[a][0], ey + kCorner[a][1],
                                   ez + kCorner[a][2]);
          for (int c = 0; c < 3; ++c)
            dofs[3 * a + c] = node == 0 ? -1 : 3 * (node - 1) + c;
        }
        for (int qa = 0; qa < 2; ++qa) {
          for (int qb = 0; qb < 2; ++qb) {
            for (int qc = 0; qc < 2; ++qc) {
              RveElement e;
              e.w = wq;
              e.material = grain;
              e.dofs = dofs;
              e.B = hex_b_matrix((2 * qa - 1) * g1, (2 * qb - 1) * g1,
                                 (2 * qc - 1) * g1, h);
              model.elements.push_back(std::move(e));
            }
          }
        }
      }
    }
  }
  return model;
}

namespace {

struct Assembled {
  Eigen::SparseMatrix<double> Kuu;
  Eigen::MatrixXd Kau;  // n_comp x n_dof
  Eigen::MatrixXd Kaa;  // n_comp x n_comp
};

Assembled assemble(const RveModel& model, const std::vector<Eigen::MatrixXd>& Dm) {
  Assembled out;
  out.Kaa = Eigen::MatrixXd::Zero(model.n_comp, model.n_comp);
  out.Kau = Eigen::MatrixXd::Zero(model.n_comp, model.n_dof);
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& e : model.elements) {
    const Eigen::MatrixXd& D = Dm[e.material];
    const Eigen::MatrixXd DB = D * e.B;                       // n_comp x n_local
    const Eigen::MatrixXd K = e.w * e.B.transpose() * DB;     // n_local x n_local
    out.Kaa += e.w * D;
    const int nl = static_cast<int>(e.dofs.size());
    for (int a = 0; a < nl; ++a) {
      if (e.dofs[a] < 0) continue;
      out.Kau.col(e.dofs[a]) += e.w * DB.col(a);
      for (int b = 0; b < nl; ++b)
        if (e.dofs[b] >= 0) trips.emplace_back(e.dofs[a], e.dofs[b], K(a, b));
    }
  }
  out.Kuu.resize(model.n_dof, model.n_dof);
  out.Kuu.setFromTriplets(trips.begin(), trips.end());
  return out;
}

std::vector<Eigen::MatrixXd> elastic_moduli(const RveModel& model) {
  std::vector<Eigen::MatrixXd> Dm;
  Dm.reserve(model.materials.size());
  for (const auto& m : model.materials) Dm.push_back(m.C);
  return Dm;
}

std::vector<Eigen::MatrixXd> laplace_moduli(const RveModel& model, double s) {
  std::vector<Eigen::MatrixXd> Dm;
  Dm.reserve(model.materials.size());
  for (const auto& m : model.materials) {
    Eigen::MatrixXd D = m.C;
    for (const auto& b : m.branches) D -= b.mu / (1.0 + s * b.tau) * m.dir;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (D + D.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw numerics_error("effective_kernel_laplace: indefinite local moduli at s=" +
                           std::to_string(s));
    Dm.push_back(std::move(D));
  }
  return Dm;
}

// Schur complement (Kaa - Kau Kuu^{-1} Kau^T) / volume: the effective moduli
// of the constrained system.
Eigen::MatrixXd effective_schur(const RveModel& model,
                                const std::vector<Eigen::MatrixXd>& Dm) {
  Assembled a = assemble(model, Dm);
  Eigen::MatrixXd S = a.Kaa;
  if (model.n_dof > 0) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a.Kuu);
    if (solver.info() != Eigen::Success)
      throw numerics_error("rve: singular constrained stiffness");
    const Eigen::MatrixXd X = solver.solve(a.Kau.transpose());
    if (solver.info() != Eigen::Success)
      throw numerics_error("rve: stiffness solve failed");
    S -= a.Kau * X;
  }
  S /= model.volume;
  return 0.5 * (S + S.transpose());
}

}  // namespace

Eigen::MatrixXd effective_elastic(const RveModel& model) {
  return effective_schur(model, elastic_moduli(model));
}

Eigen::MatrixXd effective_kernel_laplace(const RveModel& model, double s) {
  if (!(s > 0.0))
    throw std::invalid_argument("effective_kernel_laplace: s must be positive");
  const Eigen::MatrixXd cbar = effective_elastic(model);
  const Eigen::MatrixXd cs = effective_schur(model, laplace_moduli(model, s));
  return cbar - cs;
}

Eigen::MatrixXd solve_time_domain(const RveModel& model, const TimeGrid& grid,
                                  const Eigen::MatrixXd& ebar) {
  if (ebar.rows() != grid.size() || ebar.cols() != model.n_comp)
    throw std::invalid_argument("solve_time_domain: strain path has wrong shape");
  const int nc = model.n_comp;
  const int ne = static_cast<int>(model.elements.size());
  const double dt = grid.dt();

  // per-material step data
  struct BranchStep {
    double gain, decay, c_prev, c_new;
  };
  std::vector<std::vector<BranchStep>> steps(model.materials.size());
  std::vector<Eigen::MatrixXd> Deff;
  Deff.reserve(model.materials.size());
  for (size_t m = 0; m < model.materials.size(); ++m) {
    const auto& mat = model.materials[m];
    Eigen::MatrixXd D = mat.C;
    for (const auto& b : mat.branches) {
      const auto c = numeric::exp_step_coeffs(1.0 / b.tau, dt);
      const double gain = b.mu / b.tau;
      steps[m].push_back({gain, c.decay, c.c_prev, c.c_new});
      D -= gain * c.c_new * mat.dir;
    }
    Deff.push_back(std::move(D));
  }

  Assembled a0 = assemble(model, elastic_moduli(model));
  Assembled ae = assemble(model, Deff);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver0, solverE;
  if (model.n_dof > 0) {
    solver0.compute(a0.Kuu);
    solverE.compute(ae.Kuu);
    if (solver0.info() != Eigen::Success || solverE.info() != Eigen::Success)
      throw numerics_error("solve_time_domain: singular step stiffness");
  }

  std::vector<Eigen::MatrixXd> hist(ne);  // n_comp x branches per element
  std::vector<Eigen::VectorXd> eps_prev(ne, Eigen::VectorXd::Zero(nc));
  for (int e = 0; e < ne; ++e)
    hist[e] = Eigen::MatrixXd::Zero(nc, steps[model.elements[e].material].size());

  Eigen::MatrixXd sbar(grid.size(), nc);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.n_dof);

  auto gather = [&](const RveElement& e) {
    Eigen::VectorXd ul(e.dofs.size());
    for (size_t a = 0; a < e.dofs.size(); ++a)
      ul(a) = e.dofs[a] < 0 ? 0.0 : u(e.dofs[a]);
    return ul;
  };

  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd eb = ebar.row(i).transpose();
    if (i == 0) {
      if (model.n_dof > 0) u = solver0.solve(-(a0.Kau.transpose() * eb));
    } else {
      Eigen::VectorXd rhs = -(ae.Kau.transpose() * eb);
      for (int e = 0; e < ne; ++e) {
        const auto& el = model.elements[e];
        const auto& st = steps[el.material];
        Eigen::VectorXd r = Eigen::VectorXd::Zero(nc);
        for (size_t b = 0; b < st.size(); ++b)
          r += st[b].gain *
               (st[b].decay * hist[e].col(b) + st[b].c_prev * eps_prev[e]);
        r = model.materials[el.material].dir * r;
        const Eigen::VectorXd fe = el.w * el.B.transpose() * r;
        for (size_t aIdx = 0; aIdx < el.dofs.size(); ++aIdx)
          if (el.dofs[aIdx] >= 0) rhs(el.dofs[aIdx]) += fe(aIdx);
      }
      if (model.n_dof > 0) u = solverE.solve(rhs);
    }

    Eigen::VectorXd stress_sum = Eigen::VectorXd::Zero(nc);
    for (int e = 0; e < ne; ++e) {
      const auto& el = model.elements[e];
      const auto& mat = model.materials[el.material];
      const auto& st = steps[el.material];
      const Eigen::VectorXd eps = eb + el.B * gather(el);
      Eigen::VectorXd hered = Eigen::VectorXd::Zero(nc);
      if (i > 0) {
        for (size_t b = 0; b < st.size(); ++b) {
          hist[e].col(b) = st[b].decay * hist[e].col(b) +
                           st[b].c_prev * eps_prev[e] + st[b].c_new * eps;
          hered += st[b].gain * hist[e].col(b);
        }
      }
      const Eigen::VectorXd sig = mat.C * eps - mat.dir * hered;
      stress_sum += el.w * sig;
      eps_prev[e] = eps;
    }
    sbar.row(i) = (stress_sum / model.volume).transpose();
  }
  return sbar;
}

RveModel read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open mesh file '" + path + "'");
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (!in || tag != "histop-mesh" || version != 1)
    throw config_error("mesh file '" + path + "': bad header");
  RveModel model;
  int nmat = 0, nelem = 0;
  auto expect = [&](const std::string& key) {
    std::string got;
    in >> got;
    if (!in || got != key)
      throw config_error("mesh file '" + path + "': expected '" + key + "'");
  };
  expect("ncomp");
  in >> model.n_comp;
  if (model.n_comp != 1 && model.n_comp != 6)
    throw config_error("mesh file '" + path + "': ncomp must be 1 or 6");
  expect("ndof");
  in >> model.n_dof;
  expect("materials");
  in >> nmat;
  for (int m = 0; m < nmat; ++m) {
    std::string kind;
    in >> kind;
    RveMaterial mat;
    int W = 0;
    if (kind == "grain") {
      if (model.n_comp != 6)
        throw config_error("mesh file '" + path + "': grain material needs ncomp 6");
      double kappa, mu_inf;
      in >> kappa >> mu_inf >> W;
      PronyKernel shear;
      shear.mu_inf = mu_inf;
      for (int b = 0; b < W; ++b) {
        double mu, tau;
        in >> mu >> tau;
        shear.branches.push_back({mu, tau});
      }
      mat.C = 3.0 * kappa * mandel_volumetric() +
              2.0 * shear.instantaneous() * mandel_deviatoric();
      mat.dir = 2.0 * mandel_deviatoric();
      mat.branches = shear.branches;
    } else if (kind == "scalar") {
      if (model.n_comp != 1)
        throw config_error("mesh file '" + path + "': scalar material needs ncomp 1");
      double C;
      in >> C >> W;
      mat.C = Eigen::MatrixXd::Constant(1, 1, C);
      mat.dir = Eigen::MatrixXd::Constant(1, 1, 1.0);
      for (int b = 0; b < W; ++b) {
        double mu, tau;
        in >> mu >> tau;
        mat.branches.push_back({mu, tau});
      }
    } else {
      throw config_error("mesh file '" + path + "': unknown material kind '" + kind + "'");
    }
    if (!in) throw config_error("mesh file '" + path + "': truncated material block");
    model.materials.push_back(std::move(mat));
  }
  expect("elements");
  in >> nelem;
  for (int e = 0; e < nelem; ++e) {
    expect("element");
    RveElement el;
    in >> el.w >> el.material;
    if (el.material < 0 || el.material >= nmat)
      throw config_error("mesh file '" + path + "': material id out of range");
    el.B.resize(model.n_comp, model.n_dof);
    for (int r = 0; r < model.n_comp; ++r)
      for (int c = 0; c < model.n_dof; ++c) in >> el.B(r, c);
    if (!in) throw config_error("mesh file '" + path + "': truncated element block");
    el.dofs.resize(model.n_dof);
    for (int c = 0; c < model.n_dof; ++c) el.dofs[c] = c;
    model.volume += el.w;
    model.elements.push_back(std::move(el));
  }
  return model;
}

RveOracle::RveOracle(std::shared_ptr<const RveModel> model, TimeGrid grid)
    : model_(std::move(model)), grid_(grid) {
  if (!model_) throw std::invalid_argument("RveOracle: null model");
}

Eigen::VectorXd RveOracle::respond(const Eigen::VectorXd& strain) {
  const int nc = model_->n_comp;
  Eigen::MatrixXd ebar = Eigen::MatrixXd::Zero(grid_.size(), nc);
  if (nc == 6) {
    ebar.col(5) = std::sqrt(2.0) * strain;  // Mandel xy component
  } else {
    ebar.col(0) = strain;
  }
  const Eigen::MatrixXd sbar = solve_time_domain(*model_, grid_, ebar);
  return nc == 6 ? Eigen::VectorXd(sbar.col(5) / std::sqrt(2.0))
                 : Eigen::VectorXd(sbar.col(0));
}

}  // namespace histop
