# Copyright (c) the histop authors.
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

import histop


@pytest.fixture
def space():
    return histop.HistorySpace(T=1.0, n=500, lambda0=1.0)


def test_inner_product_matches_exact_integral(space):
    one = np.ones(501)
    # int_0^1 e^{-tau} dtau
    assert histop.inner_product(one, one, space) == pytest.approx(
        1.0 - math.exp(-1.0), abs=1e-5
    )


def test_basis_orthonormality(space):
    basis = histop.BasisSpec(3, space)
    grid = space.grid
    taus = np.array([grid.node(i) for i in range(grid.size())])
    e0 = np.array([histop.basis_eval(0, t, basis) for t in taus])
    e1 = np.array([histop.basis_eval(1, t, basis) for t in taus])
    assert histop.inner_product(e0, e0, space) == pytest.approx(1.0, abs=1e-8)
    assert histop.inner_product(e0, e1, space) == pytest.approx(0.0, abs=1e-8)


def test_sls_spectrum_alpha_zero():
    params = histop.SlsParams(C0=1.0, C1=1.0, **{"lambda": 0.5}, lambda0=1.0, T=1.0)
    spec = histop.sls_spectrum(params, 3)
    assert spec.s[0] == pytest.approx(2.0 / math.pi, rel=1e-12)


def test_identify_and_apply_roundtrip(space):
    params = histop.SlsParams(C0=2.0, C1=1.0, **{"lambda": 1.0}, lambda0=1.0, T=1.0)
    basis = histop.BasisSpec(4, space)
    S = histop.assemble_closed_form(params, basis)
    model = histop.svd_truncate(S, 4)
    assert model.s[0] > model.s[-1] >= 0.0
    phi1 = histop.reconstruct(model.Phi[:, 0], basis)
    out = histop.apply_reduced(model, phi1, basis)
    assert histop.norm_h(out, space) == pytest.approx(model.s[0], abs=1e-7)


def test_oracle_assembly_matches_closed_form(space):
    params = histop.SlsParams(C0=2.0, C1=1.0, **{"lambda": 1.0}, lambda0=1.0, T=1.0)
    basis = histop.BasisSpec(2, space)
    grid = space.grid
    oracle = histop.SlsOracle(C0=2.0, C1=1.0, **{"lambda": 1.0}, grid=grid)
    sampled = histop.assemble_from_oracle(oracle, basis)
    closed = histop.assemble_closed_form(params, basis)
    assert np.max(np.abs(sampled.S - closed.S)) < 1e-5


def test_predict_stress_step():
    grid = histop.TimeGrid(T=1.0, n=400)
    space = histop.HistorySpace(T=1.0, n=400, lambda0=1.0)
    params = histop.SlsParams(C0=2.0, C1=1.0, **{"lambda": 1.0}, lambda0=1.0, T=1.0)
    basis = histop.BasisSpec(8, space)
    model = histop.svd_truncate(histop.assemble_closed_form(params, basis), 17)
    values = np.where(np.arange(401) >= 200, 1.0, 0.0)
    program = histop.StrainProgram(grid, values)
    sigma = histop.predict_stress(model, program)
    oracle = histop.SlsOracle(C0=2.0, C1=1.0, **{"lambda": 1.0}, grid=grid)
    ref = oracle.evaluate(program).stress
    # agreement away from the jump, rank/truncation limited
    assert abs(sigma[-1] - ref[-1]) < 0.05


def test_rve_homogeneous_matches_prony():
    grid = histop.TimeGrid(T=5.0, n=100)
    sampler = histop.GrainSampler()
    model = histop.build_grain_cube(1, 1, sampler)
    cbar = histop.effective_elastic(model)
    assert cbar.shape == (6, 6)
    assert cbar[5, 5] > 0.0
    oracle = histop.RveOracle(model, grid)
    assert oracle.instantaneous_modulus() == pytest.approx(cbar[5, 5], abs=1e-9)


def test_model_file_roundtrip(tmp_path, space):
    params = histop.SlsParams(C0=2.0, C1=1.0, **{"lambda": 1.0}, lambda0=1.0, T=1.0)
    basis = histop.BasisSpec(3, space)
    model = histop.svd_truncate(histop.assemble_closed_form(params, basis), 2)
    path = tmp_path / "model.json"
    histop.save_model(model, str(path))
    loaded = histop.load_model(str(path))
    assert loaded.N == 2
    assert np.allclose(loaded.Phi, model.Phi)
