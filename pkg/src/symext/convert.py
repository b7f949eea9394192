"""Bosonic conversion of block states, extension verification, and the
partial-transpose screen.

The conversion rescales each block entrywise by the unit-diagonal PSD matrix
of its sector and embeds the result into the weight slots of the symmetric
subspace. The Schur product keeps every block PSD, the unit diagonal keeps the
weighted trace, and the adjacent-weight entries of the rescaling matrix are
exactly the ratio of marginal coefficients, so the (A, B1) marginal is
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import BlockState, blocks_to_global, raw_marginal_from_blocks
from .caps import full_space_cap
from .linalg import (
    DensityMatrix,
    adjacent_transposition,
    herm_deviation,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    permutation_operator,
)
from .schur import build_schur_basis, coeff_matrix_P, dicke_isometry
from .young import YoungDiagram, hook_dim

_FULL_CHECK_MAX_K = 8


class BosonicState:
    """Extension supported on the symmetric subspace, in weight coordinates.

    The matrix acts on A tensor the k+1 weight slots (A index major, weight
    ascending); embedding through the Dicke isometry gives the full state.
    """

    def __init__(self, dA: int, k: int, matrix, *, atol: float = 1e-6):
        self.dA = int(dA)
        self.k = int(k)
        matrix = np.array(matrix, dtype=complex)
        n = self.dA * (self.k + 1)
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} does not match dA={dA}, k={k}")
        dev = herm_deviation(matrix)
        if dev > atol:
            raise ValueError(f"matrix not Hermitian (deviation {dev:.3e})")
        matrix = (matrix + matrix.conj().T) / 2
        tr = float(matrix.trace().real)
        if abs(tr - 1.0) > atol:
            raise ValueError(f"trace {tr!r} is not 1 within {atol:g}")
        matrix.flags.writeable = False
        self.matrix = matrix

    def embed(self) -> DensityMatrix:
        """Full state on A plus k qubits."""
        if self.k > full_space_cap():
            raise ValueError(f"k={self.k} above the full-space cap {full_space_cap()}")
        lift = np.kron(np.eye(self.dA), dicke_isometry(self.k))
        full = lift @ self.matrix @ lift.conj().T
        return DensityMatrix(full, (self.dA,) + (2,) * self.k, check_psd=False)

    def pair_marginal(self) -> DensityMatrix:
        """(A, B1) marginal from the weight coefficient tables."""
        top = YoungDiagram(self.k, 0)
        matrix = raw_marginal_from_blocks(self.k, self.dA, [(top, self.matrix)])
        return DensityMatrix(matrix, (self.dA, 2), check_psd=False)

    def __repr__(self):
        return f"BosonicState(dA={self.dA}, k={self.k})"


def sym_to_bos(bs: BlockState) -> BosonicState:
    """Convert a block state into a bosonic extension with the same marginal."""
    k, dA = bs.k, bs.dA
    out = np.zeros((dA, k + 1, dA, k + 1), dtype=complex)
    for lam, x in bs.blocks.items():
        nw = lam.num_weights
        scale = hook_dim(lam) * coeff_matrix_P(lam)
        xr = x.reshape(dA, nw, dA, nw)
        lo = lam.lambda2  # weight -j sits at slot lambda2
        out[:, lo : lo + nw, :, lo : lo + nw] += xr * scale[None, :, None, :]
    return BosonicState(dA, k, out.reshape(dA * (k + 1), dA * (k + 1)))


@dataclass(frozen=True)
class ExtensionReport:
    """Deviations measured by verify_extension, all compared against one tol.

    nonsymmetric_overlap is the weight outside the symmetric subspace; it is
    only required to vanish for a bosonic extension.
    """

    tol: float
    min_eigenvalue: float
    trace_deviation: float
    marginal_deviation: float
    invariance_deviation: float
    nonsymmetric_overlap: float

    @property
    def psd_ok(self) -> bool:
        return self.min_eigenvalue >= -self.tol

    @property
    def trace_ok(self) -> bool:
        return self.trace_deviation <= self.tol

    @property
    def marginal_ok(self) -> bool:
        return self.marginal_deviation <= self.tol

    @property
    def invariance_ok(self) -> bool:
        return self.invariance_deviation <= self.tol

    @property
    def support_ok(self) -> bool:
        return self.nonsymmetric_overlap <= self.tol

    @property
    def symmetric_ok(self) -> bool:
        return self.psd_ok and self.trace_ok and self.marginal_ok and self.invariance_ok

    @property
    def bosonic_ok(self) -> bool:
        return self.symmetric_ok and self.support_ok


def _verify_full(sigma: DensityMatrix, rho_ab: DensityMatrix, k: int, tol: float) -> ExtensionReport:
    dims = sigma.dims
    if len(dims) != k + 1:
        raise ValueError(f"layout {dims} does not have {k} extension legs")
    d = dims[1]
    if any(x != d for x in dims[1:]):
        raise ValueError(f"extension legs in {dims} are not all equal")
    if rho_ab.dims != (dims[0], d):
        raise ValueError(f"marginal layout {rho_ab.dims} does not match extension {dims}")
    low = min_eigenvalue(sigma.matrix)
    trace_dev = abs(float(sigma.matrix.trace().real) - 1.0)
    marg_dev = max(
        float(np.linalg.norm(sigma.marginal((0, i)) - rho_ab.matrix)) for i in range(1, k + 1)
    )
    inv_dev = 0.0
    for t in range(k - 1):
        perm = permutation_operator(k, adjacent_transposition(k, t), d)
        p = np.kron(np.eye(dims[0]), perm)
        inv_dev = max(inv_dev, float(np.linalg.norm(p @ sigma.matrix @ p.T - sigma.matrix)))
    if d == 2:
        lift = np.kron(np.eye(dims[0]), dicke_isometry(k))
    elif k == 2:
        swap = permutation_operator(2, (1, 0), d)
        sym = (np.eye(d * d) + swap) / 2
        w, u = np.linalg.eigh(sym)
        lift = np.kron(np.eye(dims[0]), u[:, w > 0.5])
    else:
        raise ValueError("support check available for qubit legs or for two legs")
    overlap = float(sigma.matrix.trace().real - np.trace(lift.conj().T @ sigma.matrix @ lift).real)
    return ExtensionReport(tol, low, trace_dev, marg_dev, inv_dev, max(overlap, 0.0))


def _verify_bosonic(sigma: BosonicState, rho_ab: DensityMatrix, k: int, tol: float) -> ExtensionReport:
    if sigma.k != k:
        raise ValueError(f"extension has k={sigma.k}, expected {k}")
    if k <= _FULL_CHECK_MAX_K:
        full = _verify_full(sigma.embed(), rho_ab, k, tol)
        # embedding is supported on the symmetric subspace by construction
        return full
    if rho_ab.dims != (sigma.dA, 2):
        raise ValueError(f"marginal layout {rho_ab.dims} does not match extension")
    low = min_eigenvalue(sigma.matrix)
    trace_dev = abs(float(sigma.matrix.trace().real) - 1.0)
    marg_dev = float(np.linalg.norm(sigma.pair_marginal().matrix - rho_ab.matrix))
    return ExtensionReport(tol, low, trace_dev, marg_dev, 0.0, 0.0)


def _verify_blocks(bs: BlockState, rho_ab: DensityMatrix, k: int, tol: float) -> ExtensionReport:
    if bs.k != k:
        raise ValueError(f"extension has k={bs.k}, expected {k}")
    if k <= _FULL_CHECK_MAX_K:
        return _verify_full(blocks_to_global(bs, build_schur_basis(k)), rho_ab, k, tol)
    if rho_ab.dims != (bs.dA, 2):
        raise ValueError(f"marginal layout {rho_ab.dims} does not match extension")
    low = min(
        (float(np.linalg.eigvalsh(x)[0]) for x in bs.blocks.values()), default=0.0
    )
    trace_dev = abs(bs.weighted_trace - 1.0)
    marg = raw_marginal_from_blocks(k, bs.dA, bs.blocks.items())
    marg_dev = float(np.linalg.norm(marg - rho_ab.matrix))
    top = YoungDiagram(k, 0)
    outside = sum(
        hook_dim(lam) * float(x.trace().real) for lam, x in bs.blocks.items() if lam != top
    )
    return ExtensionReport(tol, low, trace_dev, marg_dev, 0.0, max(outside, 0.0))


def verify_extension(sigma, rho_ab: DensityMatrix, k: int, tol: float = 1e-8) -> ExtensionReport:
    """Check an extension candidate against its claimed pair marginal.

    Accepts a full-space DensityMatrix, a BosonicState, or a BlockState
    certificate. Small instances are embedded and checked in the full space;
    larger ones use the weight coefficient tables.
    """
    if isinstance(sigma, BosonicState):
        return _verify_bosonic(sigma, rho_ab, k, tol)
    if isinstance(sigma, BlockState):
        return _verify_blocks(sigma, rho_ab, k, tol)
    if isinstance(sigma, DensityMatrix):
        return _verify_full(sigma, rho_ab, k, tol)
    raise TypeError(f"cannot verify extension of type {type(sigma).__name__}")


@dataclass(frozen=True)
class TildeReport:
    state: DensityMatrix
    ppt: bool
    pt_min_eigenvalue: float


def tilde_state(rho_ab: DensityMatrix, k: int) -> TildeReport:
    """Mixture of rho_ab with its A marginal that is extendible-sensitive.

    If rho_ab has a k-leg symmetric extension the returned state is separable,
    so a negative partial transpose here rules the extension out cheaply.
    """
    if len(rho_ab.dims) != 2:
        raise ValueError(f"layout {rho_ab.dims} is not bipartite")
    if k < 1:
        raise ValueError("k must be at least 1")
    dA, dB = rho_ab.dims
    rho_a = rho_ab.marginal((0,))
    mix = np.kron(rho_a, np.eye(dB))
    if dB == 2:
        # qubit B side: the bosonic and symmetric hierarchies coincide, so the
        # stronger mixing ratio applies
        matrix = (mix + k * rho_ab.matrix) / (k + 2)
    else:
        matrix = (dB * mix + k * rho_ab.matrix) / (dB * dB + k)
    state = DensityMatrix(matrix, (dA, dB), check_psd=False)
    pt = partial_transpose(matrix, (dA, dB), 1)
    low = min_eigenvalue(pt)
    return TildeReport(state, low >= -1e-10, low)
