"""Smoke tests for the python module: each pipeline runs end to end on a
small input and its certificate checks out against numpy."""

import math

import numpy as np
import pytest

import hypercosh


def test_sym_eig_reconstructs():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((6, 6))
    a = (a + a.T) / 2
    vals, vecs = hypercosh.sym_eig(a)
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.T, a, atol=1e-10)


def test_trace_cosh_matches_numpy():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((5, 5))
    a = (a + a.T) / 2
    expected = float(np.cosh(np.linalg.eigvalsh(a)).sum())
    assert hypercosh.trace_cosh(a) == pytest.approx(expected, rel=1e-12)


def test_balance_meets_bound():
    rng = np.random.default_rng(3)
    mats = []
    for _ in range(12):
        m = rng.standard_normal((12, 12))
        m = (m + m.T) / 2
        mats.append(m / np.linalg.norm(m, 2))
    out = hypercosh.balance(mats)
    signed = sum(s * m for s, m in zip(out["signs"], mats))
    value = float(np.linalg.norm(signed, 2))
    assert value == pytest.approx(out["value"], abs=1e-10)
    assert value <= 2.0 * math.sqrt(12 * math.log(24)) + 1e-8


def test_expander_on_z16():
    table = hypercosh.cyclic_table(16)
    out = hypercosh.build_expander(table, 0.6)
    assert out["lambda"] <= 0.6
    assert len(out["S"]) == 2 * out["t"]


def test_isotropic_sparsify_residual():
    rng = np.random.default_rng(4)
    q, _ = np.linalg.qr(rng.standard_normal((32, 4)))
    out = hypercosh.isotropic_sparsify(q, 0.5)
    acc = np.zeros((4, 4))
    for idx, s in zip(out["indices"], out["scalars"]):
        acc += s * np.outer(q[idx], q[idx])
    assert np.linalg.norm(acc - np.eye(4), 2) == pytest.approx(out["residual"], abs=1e-9)
    assert out["residual"] <= 0.5


def test_spectral_sandwich():
    rng = np.random.default_rng(5)
    v = 0.4 * rng.standard_normal((40, 4))
    out = hypercosh.spectral_sparsify(v, 0.4)
    a = v.T @ v
    approx = sum(s * np.outer(v[i], v[i]) for i, s in enumerate(out["weights"]) if s > 0)
    lo, hi = (1 - 0.4) ** 3, (1 + 0.4) ** 3
    assert np.all(np.linalg.eigvalsh(approx - lo * a) >= -1e-8 * np.linalg.norm(a, 2))
    assert np.all(np.linalg.eigvalsh(hi * a - approx) >= -1e-8 * np.linalg.norm(a, 2))
    assert out["support_size"] <= math.ceil(4 / 0.16)


def test_sdd_paths():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((20, 20))
    a = (a + a.T) / 2
    np.fill_diagonal(a, np.abs(a).sum(axis=1) - np.abs(np.diag(a)) + 1.0)
    assert hypercosh.theta_of(a) <= 4.0 + 1e-9

    det = hypercosh.sdd_sparsify_deterministic(a, 0.4)
    assert det["error"] <= 0.4 * np.linalg.norm(a, 2)
    assert np.allclose(det["dense"], det["dense"].T)

    rand = hypercosh.sdd_sparsify_randomized(a, float(np.linalg.norm(a, 2)), 0.9, 7)
    assert rand["nnz"] >= 20


def test_generic_elementwise():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((8, 8))
    a = (a + a.T) / 2
    out = hypercosh.sparsify_generic(a, 0.6)
    assert out["error"] <= 0.6
    assert out["nnz"] <= out["budget"]


def test_input_errors_surface():
    with pytest.raises(hypercosh.InputError):
        hypercosh.theta_of(np.zeros((3, 3)))
