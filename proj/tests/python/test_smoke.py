import json
import math

import numpy as np
import pytest

import vqcfd


def test_encode_round_trip():
    g = vqcfd.Grid(1.0, 3)
    lam, amps = vqcfd.encode(g, [2.0] * 8)
    assert lam == pytest.approx(2.0 * 2 ** 1.5)
    assert all(abs(a - 2 ** -1.5) < 1e-14 for a in amps)


def test_chi_and_entropy():
    g = vqcfd.Grid(1.0, 4)
    delta = [0.0] * 16
    delta[5] = 1.0
    assert vqcfd.chi_99(g, delta) == 1
    assert vqcfd.interscale_entropy(g, delta, 2) == pytest.approx(0.0, abs=1e-12)


def test_ansatz_and_prepare():
    c = vqcfd.build_ansatz(5, vqcfd.full_expressivity_depth(5))
    assert c.n_params == 133
    psi = vqcfd.prepare(c, [0.0] * c.n_params)
    assert psi[0] == 1.0


def test_operator_matrices():
    n, h = 3, 0.125
    d = vqcfd.operator_matrix("nabla", n, h)
    assert np.allclose(d, -d.T)
    lap = vqcfd.operator_matrix("laplacian", n, h)
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert vqcfd.pauli_decompose("shift_plus", 1).strip() == "1 0 X"


def test_evolve_matches_oracle():
    g = vqcfd.Grid(1.0, 3)
    f0 = vqcfd.analytic_hump(0.1, 0.5, 0.01, 0.5, g)
    traj = vqcfd.evolve(g, f0, nu=0.01, tau=0.01, steps=3, seed=2)
    assert traj.completed
    ref = vqcfd.fd_trajectory(g, f0, 0.01, 0.01, 3)
    for frame, want in zip(traj.frames, ref):
        assert math.dist(frame.field, want) < 1e-4
    adj = vqcfd.adjoint(traj, 0.01, 0.01, terminal=[1.0] * 8)
    assert len(adj.frames) == 4
    assert traj.to_csv().startswith("step,time,residual,iters,lambda0")


def test_config_validation():
    resolved = json.loads(vqcfd.resolve_config("{}"))
    assert resolved["grid"]["n_qubits"] == 5
    with pytest.raises(vqcfd.ConfigError):
        vqcfd.resolve_config('{"grid": {"n_qubits": 1}}')


def test_acceptance_subset():
    [row] = vqcfd.run_acceptance(only=[6])
    assert row["id"] == 6 and row["pass"]
