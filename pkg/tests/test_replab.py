import itertools
import json

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chromstack import replab
from chromstack.gaussian import GaussInt, Intertwiner


def _np(M: Intertwiner) -> np.ndarray:
    return M.to_complex_array()


def _eps(a, b, c):
    # sign of the permutation, computed independently of replab.eps
    return int(round(np.linalg.det(np.eye(3)[[a - 1, b - 1, c - 1]])))


def _dense_rho(power, a):
    ad = np.zeros((3, 3), dtype=complex)
    for b, c in itertools.product((1, 2, 3), repeat=2):
        ad[c - 1, b - 1] = 1j * _eps(a, b, c)
    out = np.zeros((3**power, 3**power), dtype=complex)
    for k in range(power):
        out += np.kron(np.kron(np.eye(3**k), ad), np.eye(3 ** (power - 1 - k)))
    return out


def _dense_equivariant(M, m, l):
    M = _np(M)
    return all(np.allclose(M @ _dense_rho(m, a), _dense_rho(l, a) @ M) for a in (1, 2, 3))


def test_projectors():
    ops = replab.operators()
    T, A, S = ops["T"], ops["A"], ops["S"]
    assert T + A + S == sympy.eye(9)
    for P in (T, A, S):
        assert P * P == P
    for P, Q in itertools.permutations((T, A, S), 2):
        assert (P * Q).is_zero_matrix
    assert (T.rank(), A.rank(), S.rank()) == (1, 3, 5)
    assert ops["F"].shape == (9, 3) and ops["Ft"].shape == (3, 9)


def test_Ft_entries():
    Ft = replab.operators()["Ft"]
    for a, b, c in itertools.product((1, 2, 3), repeat=3):
        assert Ft[c - 1, 3 * (a - 1) + (b - 1)] == sympy.I * _eps(a, b, c)


def test_ad_commutators():
    for a, b in itertools.product((1, 2, 3), repeat=2):
        A, B = _np(replab.ad(a)), _np(replab.ad(b))
        want = sum(1j * _eps(a, b, c) * _np(replab.ad(c)) for c in (1, 2, 3))
        assert np.allclose(A @ B - B @ A, want)
        assert np.allclose(A.T, -A)


@pytest.mark.parametrize("power", [1, 2, 3, 4])
def test_rho_sl2_relations(power):
    R = {a: _np(replab.rho(power, a)) for a in (1, 2, 3)}
    for a, b in itertools.product((1, 2, 3), repeat=2):
        want = sum(1j * _eps(a, b, c) * R[c] for c in (1, 2, 3))
        assert np.allclose(R[a] @ R[b] - R[b] @ R[a], want)
    if power <= 3:
        for a in (1, 2, 3):
            assert np.allclose(R[a], _dense_rho(power, a))


def test_calibration_scalars():
    rep = replab.calibrate()
    assert rep.frozen_order == replab.FROZEN_ORDER
    assert rep.scalar("FtF") == 2
    c = rep.scalar("FFt")
    assert abs(c) == 2
    assert rep.scalar("exchange") == 1
    for name in ("FtI.IF", "IFt.FI"):
        assert (rep.scalar(name, "T"), rep.scalar(name, "A"), rep.scalar(name, "S")) == (2, 1, -1)
    assert rep.scalar("recF") == 1 and rep.scalar("recFt") == 1
    other = [o for o in replab.WEDGE_ORDERS if o != rep.frozen_order][0]
    assert rep.scalar("FtF", order=other) == -2
    assert rep.scalar("recF", order=other) == -1


def test_calibration_measured_matrices():
    ops = replab.operators()
    F, Ft, A = ops["F"], ops["Ft"], ops["A"]
    assert Ft * F == 2 * sympy.eye(3)
    c = replab.calibrate().scalar("FFt")
    assert F * Ft == c * A
    # projector spectral identity
    assert A == (F * Ft) / c


def test_calibration_json_deterministic():
    a = replab.calibrate().to_json()
    b = replab.calibrate().to_json()
    assert a == b
    data = json.loads(a)
    assert data["frozen_order"] == replab.FROZEN_ORDER
    assert set(data["orders"]) == set(replab.WEDGE_ORDERS)


def test_hom_dimensions():
    dims = replab.calibrate().hom_dimensions
    assert dims["hom(V^1,V^2)"] == 1 and dims["hom(V^2,V^1)"] == 1
    assert dims["hom(V^1,V^1)"] == 1
    # V x V = spin 0 + 1 + 2, each once
    assert dims["hom(V^2,V^2)"] == 3
    assert dims["hom(V^0,V^2)"] == 1


def test_F_Ft_equivariant():
    F, Ft = replab.F_matrix(), replab.Ft_matrix()
    assert replab.equivariance_check(F, 1, 2)
    assert replab.equivariance_check(Ft, 2, 1)
    assert _dense_equivariant(F, 1, 2) and _dense_equivariant(Ft, 2, 1)
    for order in replab.WEDGE_ORDERS:
        assert replab.equivariance_check(replab.F_matrix(order))


def test_random_matrix_fails():
    rng = np.random.default_rng(0)
    M = Intertwiner.from_dense(rng.integers(-3, 4, size=(9, 3)).tolist())
    assert not replab.equivariance_check(M, 1, 2)
    assert not _dense_equivariant(M, 1, 2)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        replab.equivariance_check(replab.F_matrix(), 2, 1)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=5), st.integers(0, 1))
def test_equivariance_check_agrees_with_dense(words, order):
    # products of padded F / Ft pieces, optionally perturbed
    F, Ft = replab.F_matrix(), replab.Ft_matrix()
    M = Intertwiner.identity(2)
    for w in words:
        piece = [F.pad(0, 1), F.pad(1, 0), Ft.pad(0, 1)][w % 3]
        if piece.source_power != M.target_power:
            continue
        if piece.target_power > 3:
            continue
        M = piece @ M
    if order:
        r, c = M.shape
        M = M + Intertwiner.from_triplets((r, c), [(0, 0, GaussInt(1))])
    m, l = M.source_power, M.target_power
    assert replab.equivariance_check(M, m, l) == _dense_equivariant(M, m, l)
