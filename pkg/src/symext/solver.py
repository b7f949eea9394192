"""Extendibility feasibility by projection splitting.

Both extension problems are intersections of a product of PSD cones (one
block per allowed sector) with an affine set pinning the (A, B1) marginal and
the normalization. The solver runs Douglas-Rachford splitting between the two
sets: both projections are exact (eigenvalue clipping per block, a
precomputed pseudo-inverse for the affine part) and the governing iterate
advances by reflections. The cone shadow is PSD by construction, so a small
constraint residual on it certifies feasibility outright. When the sets are
disjoint the step length decreases to the distance between them, so a stalled
step length above tol_infeasible_gap is reported as infeasibility with that
gap estimate. Everything else times out as UNDECIDED.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt
from typing import Any

import numpy as np

from .blocks import BlockState, raw_marginal_from_blocks
from .caps import block_cap
from .linalg import DensityMatrix, partial_trace
from .young import YoungDiagram, hook_dim, list_diagrams

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"
UNDECIDED = "UNDECIDED"

_STALL_WINDOW = 200
_STALL_REL_CHANGE = 1e-7
_STALL_CHECK_EVERY = 25


@dataclass(frozen=True)
class SolverConfig:
    tol_feasible: float = 1e-8
    tol_infeasible_gap: float = 1e-6
    max_iter: int = 20000
    seed: int = 0  # echoed in reports; the iteration itself is deterministic

    def __post_init__(self):
        if self.tol_feasible <= 0 or self.tol_infeasible_gap <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolverReport:
    status: str
    residual: float
    gap_estimate: float
    iterations: int
    certificate: Any = None


@lru_cache(maxsize=64)
def _triu(n: int):
    return np.triu_indices(n, 1)


def _herm_to_vec(h: np.ndarray) -> np.ndarray:
    # isometric real coordinates: diagonal, then sqrt(2) * upper real/imag
    n = h.shape[0]
    iu = _triu(n)
    s = sqrt(2.0)
    return np.concatenate([np.real(np.diag(h)), s * np.real(h[iu]), s * np.imag(h[iu])])


def _vec_to_herm(v: np.ndarray, n: int) -> np.ndarray:
    iu = _triu(n)
    m = n * (n - 1) // 2
    h = np.zeros((n, n), dtype=complex)
    h[np.diag_indices(n)] = v[:n]
    upper = (v[n : n + m] + 1j * v[n + m :]) / sqrt(2.0)
    h[iu] = upper
    h[(iu[1], iu[0])] = upper.conj()
    return h


class _BlockSpace:
    """Stacked real coordinates for a list of Hermitian block sizes."""

    def __init__(self, sizes):
        self.sizes = list(sizes)
        self.slices = []
        at = 0
        for n in self.sizes:
            self.slices.append(slice(at, at + n * n))
            at += n * n
        self.dim = at

    def to_vec(self, mats) -> np.ndarray:
        return np.concatenate([_herm_to_vec(m) for m in mats])

    def to_mats(self, v: np.ndarray) -> list[np.ndarray]:
        return [_vec_to_herm(v[sl], n) for sl, n in zip(self.slices, self.sizes)]

    def cone_project(self, v: np.ndarray) -> np.ndarray:
        out = np.empty_like(v)
        for sl, n in zip(self.slices, self.sizes):
            h = _vec_to_herm(v[sl], n)
            w, u = np.linalg.eigh(h)
            np.clip(w, 0.0, None, out=w)
            out[sl] = _herm_to_vec((u * w) @ u.conj().T)
        return out


def _douglas_rachford(space: _BlockSpace, amap: np.ndarray, b: np.ndarray, cfg: SolverConfig):
    """Returns (status, residual, gap_estimate, iterations, feasible_vec_or_None)."""
    at = amap.T
    gram = amap @ at
    gram_inv = np.linalg.pinv(gram, hermitian=True)

    def affine_project(z: np.ndarray) -> np.ndarray:
        return z - at @ (gram_inv @ (amap @ z - b))

    x = affine_project(np.zeros(space.dim))
    steps: list[float] = []
    best_res = np.inf
    step = np.nan
    for it in range(1, cfg.max_iter + 1):
        y = space.cone_project(x)
        res = float(np.linalg.norm(amap @ y - b))
        best_res = min(best_res, res)
        if res <= cfg.tol_feasible:
            return FEASIBLE, res, 0.0, it, y
        nxt = x + affine_project(2.0 * y - x) - y
        step = float(np.linalg.norm(nxt - x))
        steps.append(step)
        x = nxt
        if it >= _STALL_WINDOW and it % _STALL_CHECK_EVERY == 0 and step > cfg.tol_infeasible_gap:
            ref = steps[it - _STALL_WINDOW]
            if abs(step - ref) <= _STALL_REL_CHANGE * max(step, 1e-300):
                return INFEASIBLE, res, step, it, None
    return UNDECIDED, best_res, step, cfg.max_iter, None


def _build_sector_affine(k: int, dA: int, diagrams: list[YoungDiagram], rho_ab: DensityMatrix):
    """Constraint matrix for: glued marginal equals rho_ab, weighted trace is 1."""
    sizes = [dA * lam.num_weights for lam in diagrams]
    space = _BlockSpace(sizes)
    cols = np.zeros((4 * dA * dA + 1, space.dim))
    at = 0
    for lam, n in zip(diagrams, sizes):
        d = hook_dim(lam)
        for t in range(n * n):
            unit = np.zeros(n * n)
            unit[t] = 1.0
            h = _vec_to_herm(unit, n)
            marg = raw_marginal_from_blocks(k, dA, [(lam, h)])
            cols[:-1, at + t] = _herm_to_vec(marg)
            cols[-1, at + t] = d * float(h.trace().real)
        at += n * n
    b = np.concatenate([_herm_to_vec(rho_ab.matrix), [1.0]])
    return space, cols, b


def _solve_sectors(rho_ab: DensityMatrix, k: int, diagrams: list[YoungDiagram], cfg: SolverConfig) -> SolverReport:
    if len(rho_ab.dims) != 2 or rho_ab.dims[1] != 2:
        raise ValueError(f"layout {rho_ab.dims} is not (A, qubit); use the generic pair solver for other B dimensions")
    if not 1 <= k <= block_cap():
        raise ValueError(f"k={k} outside 1..{block_cap()} (set SYMEXT_MAX_K to change the cap)")
    dA = rho_ab.dims[0]
    space, amap, b = _build_sector_affine(k, dA, diagrams, rho_ab)
    status, res, gap, it, y = _douglas_rachford(space, amap, b, cfg)
    certificate = None
    if status == FEASIBLE:
        mats = space.to_mats(y)
        certificate = BlockState(k, dA, dict(zip(diagrams, mats)), atol=max(1e-6, 10 * cfg.tol_feasible))
    return SolverReport(status, res, gap, it, certificate)


def solve_symmetric(rho_ab: DensityMatrix, k: int, cfg: SolverConfig | None = None) -> SolverReport:
    """Decide whether rho_ab has a k-leg permutation-invariant extension."""
    cfg = cfg or SolverConfig()
    return _solve_sectors(rho_ab, k, list_diagrams(k), cfg)


def solve_bosonic(rho_ab: DensityMatrix, k: int, cfg: SolverConfig | None = None) -> SolverReport:
    """Decide extendibility with the extension confined to the top sector."""
    cfg = cfg or SolverConfig()
    return _solve_sectors(rho_ab, k, list_diagrams(k)[:1], cfg)


def sym2_isometry(dB: int) -> np.ndarray:
    """Isometry from the symmetric pair subspace into two B systems."""
    cols = []
    for i in range(dB):
        for jq in range(i, dB):
            v = np.zeros(dB * dB)
            if i == jq:
                v[i * dB + i] = 1.0
            else:
                v[i * dB + jq] = v[jq * dB + i] = 1 / sqrt(2.0)
            cols.append(v)
    return np.stack(cols, axis=1)


def solve_bosonic_k2_generic(rho_ab: DensityMatrix, dB: int, cfg: SolverConfig | None = None) -> SolverReport:
    """Two-leg bosonic extendibility for any B dimension.

    The variable lives on A tensor the symmetric pair subspace; the affine set
    pins the (A, B1) marginal of its embedding. The certificate is the state
    on that subspace.
    """
    cfg = cfg or SolverConfig()
    if len(rho_ab.dims) != 2 or rho_ab.dims[1] != dB:
        raise ValueError(f"layout {rho_ab.dims} does not match a B dimension of {dB}")
    dA = rho_ab.dims[0]
    nsym = dB * (dB + 1) // 2
    n = dA * nsym
    lift = np.kron(np.eye(dA), sym2_isometry(dB))

    def embed_marginal(h: np.ndarray) -> np.ndarray:
        full = lift @ h @ lift.conj().T
        return partial_trace(full, (dA, dB, dB), (0, 1))

    space = _BlockSpace([n])
    amap = np.zeros(((dA * dB) ** 2 + 1, n * n))
    for t in range(n * n):
        unit = np.zeros(n * n)
        unit[t] = 1.0
        h = _vec_to_herm(unit, n)
        amap[:-1, t] = _herm_to_vec(embed_marginal(h))
        amap[-1, t] = float(h.trace().real)
    b = np.concatenate([_herm_to_vec(rho_ab.matrix), [1.0]])
    status, res, gap, it, y = _douglas_rachford(space, amap, b, cfg)
    certificate = None
    if status == FEASIBLE:
        certificate = DensityMatrix(space.to_mats(y)[0], (dA, nsym), atol=max(1e-6, 10 * cfg.tol_feasible), check_psd=False)
    return SolverReport(status, res, gap, it, certificate)


def qutrit_counterexample(coeffs=(1.0, 2.0, 3.0)):
    """Three-qutrit pure state antisymmetric over the two B systems.

    Returns (pair_marginal, full_state, ket). The full state is a two-leg
    swap-invariant extension of the marginal; with pairwise distinct
    coefficients the marginal admits no bosonic two-leg extension, so the
    symmetric/bosonic equivalence seen for qubit B sides stops at dB = 3.
    """
    a, b, c = (float(x) for x in coeffs)
    ket = np.zeros(27)

    def idx(x, y, z):
        return 9 * x + 3 * y + z

    ket[idx(0, 1, 2)] = a
    ket[idx(0, 2, 1)] = -a
    ket[idx(1, 2, 0)] = b
    ket[idx(1, 0, 2)] = -b
    ket[idx(2, 0, 1)] = c
    ket[idx(2, 1, 0)] = -c
    ket /= sqrt(2 * (a * a + b * b + c * c))
    full = DensityMatrix.from_ket(ket, (3, 3, 3))
    marginal = DensityMatrix(full.marginal((0, 1)), (3, 3), check_psd=False)
    return marginal, full, ket
