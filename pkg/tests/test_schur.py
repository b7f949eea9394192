import itertools

import numpy as np
import pytest

from symext.linalg import adjacent_transposition, partial_trace, permutation_operator
from symext.schur import (
    alpha_coeff,
    build_schur_basis,
    coeff_matrix_P,
    diag_coeffs,
    dicke,
    dicke_isometry,
    export_basis,
    jplus_apply,
    p_coeff,
    xi_vector,
)
from symext.young import YoungDiagram, hook_dim, list_diagrams


def test_basis_orthonormal_small():
    for k in range(1, 8):
        b = build_schur_basis(k).matrix
        assert np.abs(b.conj().T @ b - np.eye(2**k)).max() <= 1e-12


def test_singlet_sector_is_the_singlet():
    basis = build_schur_basis(2)
    v = basis.vector(YoungDiagram(1, 1), 0, 0.0)
    target = np.array([0, 1, -1, 0]) / np.sqrt(2)
    overlap = abs(np.vdot(target, v))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_top_sector_equals_dicke():
    for k in (1, 2, 3, 5):
        basis = build_schur_basis(k)
        lam = YoungDiagram(k, 0)
        for wi, omega in enumerate(lam.weights()):
            v = basis.vector(lam, 0, omega)
            d = dicke(k, omega)
            assert abs(abs(np.vdot(d, v)) - 1.0) <= 1e-12
            # the builder fixes phases so these are equal, not just parallel
            assert np.abs(v - d).max() <= 1e-12


def test_dicke_states_explicit():
    assert np.allclose(dicke(2, 0.0), np.array([0, 1, 1, 0]) / np.sqrt(2))
    assert np.allclose(dicke(3, -1.5), np.eye(8)[0])
    assert np.allclose(dicke(3, -0.5), (np.eye(8)[1] + np.eye(8)[2] + np.eye(8)[4]) / np.sqrt(3))
    iso = dicke_isometry(3)
    assert iso.shape == (8, 4)
    assert np.allclose(iso.conj().T @ iso, np.eye(4))


def test_section3_spans():
    e = np.eye(8)
    psi_a = np.column_stack([(2 * e[1] - e[2] - e[4]) / np.sqrt(6), (e[2] - e[4]) / np.sqrt(2)])
    psi_b = np.column_stack([(2 * e[6] - e[5] - e[3]) / np.sqrt(6), (e[5] - e[3]) / np.sqrt(2)])
    basis = build_schur_basis(3)
    sec = basis.sector(YoungDiagram(2, 1))
    for wi, ext in ((0, psi_a), (1, psi_b)):
        mine = sec[:, :, wi]
        assert np.abs(mine @ mine.conj().T - ext @ ext.conj().T).max() <= 1e-12


def test_permutations_block_diagonal_and_weight_independent():
    for k in (3, 4, 5):
        basis = build_schur_basis(k)
        b = basis.matrix
        for t in range(k - 1):
            op = permutation_operator(k, adjacent_transposition(k, t))
            full = b.conj().T @ op @ b
            # no mixing between different sectors
            for lam in list_diagrams(k):
                sl = basis.column_range(lam)
                outside = full[sl, :].copy()
                outside[:, sl] = 0.0
                assert np.abs(outside).max() <= 1e-12
            # within a sector: block diagonal in weight, identical across weights
            for lam in list_diagrams(k):
                sec = basis.sector(lam)
                npath, nw = sec.shape[1], sec.shape[2]
                flat = sec.reshape(2**k, npath * nw)
                rep = (flat.conj().T @ op @ flat).reshape(npath, nw, npath, nw)
                for wi in range(nw):
                    for wj in range(nw):
                        if wi != wj:
                            assert np.abs(rep[:, wi, :, wj]).max() <= 1e-12
                for wi in range(1, nw):
                    assert np.abs(rep[:, wi, :, wi] - rep[:, 0, :, 0]).max() <= 1e-12


def brute_force_jplus(k):
    """Raising operator as an explicit matrix in the computational basis."""
    dim = 2**k
    out = np.zeros((dim, dim))
    for idx in range(dim):
        for leg in range(k):
            bit = 1 << (k - 1 - leg)
            if not idx & bit:
                out[idx | bit, idx] += 1.0
    return out


def test_jplus_ladder_action():
    for k in (2, 3, 4):
        basis = build_schur_basis(k)
        jp = brute_force_jplus(k)
        for lam in list_diagrams(k):
            ws = lam.weights()
            j = lam.spin
            for mu in range(hook_dim(lam)):
                for wi, omega in enumerate(ws):
                    v = basis.vector(lam, mu, omega)
                    assert np.abs(jplus_apply(v, k) - jp @ v).max() <= 1e-12
                    got = jp @ v
                    coeff = np.sqrt((j - omega) * (j + omega + 1))
                    if wi + 1 < len(ws):
                        want = coeff * basis.vector(lam, mu, ws[wi + 1])
                        assert np.abs(got - want).max() <= 1e-12
                    else:
                        assert np.linalg.norm(got) <= 1e-12


def test_diag_coeffs_values_and_normalization():
    assert diag_coeffs(3, -0.5) == pytest.approx((2 / 3, 1 / 3))
    assert diag_coeffs(3, 1.5) == pytest.approx((0.0, 1.0))
    for k in (1, 2, 5, 9):
        for omega in np.arange(-k / 2, k / 2 + 1):
            t0, t1 = diag_coeffs(k, omega)
            assert t0 + t1 == pytest.approx(1.0)
            if abs(omega) < k / 2:
                assert t0 / t1 == pytest.approx((k - 2 * omega) / (k + 2 * omega))


def test_alpha_known_values():
    assert alpha_coeff(YoungDiagram(3, 0), -0.5, 0.5) == pytest.approx(2 / 3)
    assert alpha_coeff(YoungDiagram(2, 1), -0.5, 0.5) == pytest.approx(1 / 3)
    assert alpha_coeff(YoungDiagram(2, 0), -1.0, 0.0) == pytest.approx(np.sqrt(2) / 2)
    # only adjacent ascending weight pairs couple
    assert alpha_coeff(YoungDiagram(3, 0), -0.5, 1.5) == 0.0
    assert alpha_coeff(YoungDiagram(3, 0), 0.5, -0.5) == 0.0


def brute_force_pair_marginal(basis, lam, wi, wj):
    k = basis.k
    sec = basis.sector(lam)
    v, w = sec[:, :, wi], sec[:, :, wj]
    return partial_trace(v @ w.conj().T / hook_dim(lam), [2] * k, [0])


def test_marginal_coefficients_against_brute_force():
    for k in (2, 3, 5):
        basis = build_schur_basis(k)
        for lam in list_diagrams(k):
            ws = lam.weights()
            for wi, omega in enumerate(ws):
                m = brute_force_pair_marginal(basis, lam, wi, wi)
                t0, t1 = diag_coeffs(k, omega)
                assert np.abs(m - np.diag([t0, t1])).max() <= 1e-12
                if wi + 1 < len(ws):
                    c = brute_force_pair_marginal(basis, lam, wi, wi + 1)
                    expect = np.zeros((2, 2))
                    expect[0, 1] = alpha_coeff(lam, omega, omega + 1, k)
                    assert np.abs(c - expect).max() <= 1e-12


def test_p_coeff_identity_and_examples():
    lam = YoungDiagram(2, 1)
    assert p_coeff(lam, -0.5, -0.5) == 1.0
    assert p_coeff(lam, -0.5, 0.5) == pytest.approx(0.5)
    # ratio form: p * alpha_top = alpha_lambda on adjacent pairs
    for k in (2, 3, 4, 6, 9):
        top = YoungDiagram(k, 0)
        for lam in list_diagrams(k):
            for omega in lam.weights()[:-1]:
                lhs = p_coeff(lam, omega, omega + 1, k) * alpha_coeff(top, omega, omega + 1, k)
                assert lhs == pytest.approx(alpha_coeff(lam, omega, omega + 1, k), abs=1e-13)


def test_xi_vector_reproduces_adjacent_ratios():
    for k in (3, 5, 8):
        for lam in list_diagrams(k):
            if lam.num_weights < 2:
                continue
            xi = xi_vector(lam, k)
            assert xi.shape == (lam.num_weights,)
            assert np.all(np.abs(xi) <= 1.0 + 1e-12)
            ws = lam.weights()
            for wi in range(len(ws) - 1):
                assert xi[wi] * xi[wi + 1] == pytest.approx(p_coeff(lam, ws[wi], ws[wi + 1], k), abs=1e-12)


def test_coeff_matrix_psd_unit_diagonal():
    for k in range(1, 11):
        for lam in list_diagrams(k):
            p = coeff_matrix_P(lam, k)
            nw = lam.num_weights
            assert p.shape == (nw, nw)
            assert np.allclose(np.diag(p), 1.0)
            assert np.allclose(p, p.T)
            eigs = np.linalg.eigvalsh(p)
            assert eigs.min() >= -1e-10
            # adjacent entries are exactly the pair couplings
            ws = lam.weights()
            for wi in range(nw - 1):
                assert p[wi, wi + 1] == pytest.approx(p_coeff(lam, ws[wi], ws[wi + 1], k), abs=1e-12)


def test_coeff_matrix_example_three_copies():
    p = coeff_matrix_P(YoungDiagram(2, 1))
    assert np.allclose(p, [[1.0, 0.5], [0.5, 1.0]])
    assert np.linalg.eigvalsh(p).min() == pytest.approx(0.5)


def test_top_sector_coeff_matrix_is_all_ones():
    for k in (2, 4, 7):
        p = coeff_matrix_P(YoungDiagram(k, 0))
        assert np.abs(p - 1.0).max() <= 1e-12


def test_export_basis_is_parseable_and_complete():
    basis = build_schur_basis(3)
    text = export_basis(basis)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    assert len(lines) == 8
    assert any(ln.startswith("2,1") for ln in lines)
    first = lines[0].split("|")
    assert len(first) == 4


def test_build_rejects_bad_k(monkeypatch):
    with pytest.raises(ValueError):
        build_schur_basis(0)
    monkeypatch.setenv("SYMEXT_MAX_K", "4")
    with pytest.raises(ValueError):
        build_schur_basis(5)
