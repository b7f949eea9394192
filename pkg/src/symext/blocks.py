"""Permutation-invariant global states in per-sector block coordinates.

A state of A plus k exchangeable qubits that commutes with every qubit
permutation is determined by one PSD block per two-row sector. The block for
sector lam acts on A tensor the weight space of lam (A index major, weight
minor); the global state is recovered by gluing each block to the path-summed
weight transfer operators of the sector.
"""

from __future__ import annotations

import numpy as np

from .caps import block_cap
from .linalg import DensityMatrix, herm_deviation
from .schur import SchurBasis, alpha_coeff, diag_coeffs
from .young import YoungDiagram, hook_dim, list_diagrams

PROFILE_ALL = "all"
PROFILE_EXCLUDE_BOSONIC = "exclude-bosonic"
PROFILES = (PROFILE_ALL, PROFILE_EXCLUDE_BOSONIC)


class BlockState:
    """One Hermitian PSD block per sector; missing sectors are zero.

    The weighted normalization sum_lam tableau_count(lam) * tr(X_lam) = 1
    makes the glued global state unit trace.
    """

    def __init__(self, k: int, dA: int, blocks, *, atol: float = 1e-6):
        self.k = int(k)
        self.dA = int(dA)
        if not 1 <= self.k <= block_cap():
            raise ValueError(f"k={k} outside 1..{block_cap()} (set SYMEXT_MAX_K to change the cap)")
        if self.dA < 1:
            raise ValueError(f"invalid A dimension {dA}")
        valid = set(list_diagrams(self.k))
        clean: dict[YoungDiagram, np.ndarray] = {}
        total = 0.0
        for lam, x in blocks.items():
            if lam not in valid:
                raise ValueError(f"[{lam.lambda1},{lam.lambda2}] is not a sector of {self.k} qubits")
            x = np.asarray(x, dtype=complex)
            n = self.dA * lam.num_weights
            if x.shape != (n, n):
                raise ValueError(f"block for [{lam.lambda1},{lam.lambda2}] has shape {x.shape}, expected {(n, n)}")
            dev = herm_deviation(x)
            if dev > atol:
                raise ValueError(f"block for [{lam.lambda1},{lam.lambda2}] not Hermitian (deviation {dev:.3e})")
            x = (x + x.conj().T) / 2
            low = float(np.linalg.eigvalsh(x)[0])
            if low < -atol:
                raise ValueError(f"block for [{lam.lambda1},{lam.lambda2}] has eigenvalue {low:.3e}")
            x.flags.writeable = False
            clean[lam] = x
            total += hook_dim(lam) * float(x.trace().real)
        if abs(total - 1.0) > atol:
            raise ValueError(f"weighted block trace {total!r} is not 1 within {atol:g}")
        self.blocks = clean

    def block(self, lam: YoungDiagram) -> np.ndarray:
        n = self.dA * lam.num_weights
        return self.blocks.get(lam, np.zeros((n, n), dtype=complex))

    @property
    def weighted_trace(self) -> float:
        return sum(hook_dim(lam) * float(x.trace().real) for lam, x in self.blocks.items())

    def __repr__(self):
        sectors = ",".join(f"[{l.lambda1},{l.lambda2}]" for l in sorted(self.blocks, key=lambda d: -d.lambda1))
        return f"BlockState(k={self.k}, dA={self.dA}, sectors={sectors})"


def blocks_to_global(bs: BlockState, basis: SchurBasis) -> DensityMatrix:
    """Glue the blocks into the full state of A plus k qubits."""
    if basis.k != bs.k:
        raise ValueError(f"basis is for k={basis.k}, blocks for k={bs.k}")
    n = 2**bs.k
    dA = bs.dA
    out = np.zeros((dA, n, dA, n), dtype=complex)
    for lam, x in bs.blocks.items():
        sec = basis.sector(lam)
        nw = lam.num_weights
        # path-summed transfer operators: glue[w, v, x, y] = sum_mu sec[x,mu,w] sec[y,mu,v]
        glue = np.einsum("xmw,ymv->wvxy", sec, sec)
        xr = x.reshape(dA, nw, dA, nw)
        out += np.einsum("awbv,wvxy->axby", xr, glue)
    matrix = out.reshape(dA * n, dA * n)
    return DensityMatrix(matrix, (dA,) + (2,) * bs.k, check_psd=False)


def global_to_blocks(rho: DensityMatrix, basis: SchurBasis) -> BlockState:
    """Blocks of the permutation average of rho.

    In the coupled basis the average keeps only terms diagonal in sector and
    path, so it reduces to zeroing cross blocks and averaging over paths. For
    an already invariant rho this is exact extraction.
    """
    k = basis.k
    if rho.dims != (rho.dims[0],) + (2,) * k:
        raise ValueError(f"layout {rho.dims} is not (A, qubit x {k})")
    dA = rho.dims[0]
    n = 2**k
    r = rho.matrix.reshape(dA, n, dA, n)
    blocks = {}
    for lam in basis.diagrams:
        sec = basis.sector(lam)
        d = sec.shape[1]
        nw = lam.num_weights
        m = np.einsum("xmw,axby,ymv->awbv", sec, r, sec, optimize=True) / d
        blocks[lam] = m.reshape(dA * nw, dA * nw)
    return BlockState(k, dA, blocks)


def _accumulate_marginal(out: np.ndarray, k: int, dA: int, lam: YoungDiagram, x: np.ndarray) -> None:
    # out has shape (dA, 2, dA, 2); adds the (A, B1) marginal of one glued sector
    d = hook_dim(lam)
    nw = lam.num_weights
    xr = np.asarray(x).reshape(dA, nw, dA, nw)
    for iw, w in enumerate(lam.weights()):
        t0, t1 = diag_coeffs(k, w)
        diag = xr[:, iw, :, iw]
        out[:, 0, :, 0] += d * t0 * diag
        out[:, 1, :, 1] += d * t1 * diag
        if iw + 1 < nw:
            a = alpha_coeff(lam, w, w + 1)
            cross = xr[:, iw, :, iw + 1]
            out[:, 0, :, 1] += d * a * cross
            out[:, 1, :, 0] += d * a * cross.conj().T


def raw_marginal_from_blocks(k: int, dA: int, items) -> np.ndarray:
    """(A, B1) marginal matrix for raw (sector, block) pairs, no validation."""
    out = np.zeros((dA, 2, dA, 2), dtype=complex)
    for lam, x in items:
        _accumulate_marginal(out, k, dA, lam, x)
    return out.reshape(2 * dA, 2 * dA)


def marginal_from_blocks(bs: BlockState) -> DensityMatrix:
    """(A, B1) marginal of the glued state, from the weight coefficient tables."""
    matrix = raw_marginal_from_blocks(bs.k, bs.dA, bs.blocks.items())
    # positivity is structural: the glued global state is PSD
    return DensityMatrix(matrix, (bs.dA, 2), check_psd=False)


def gen_random_extendible(k: int, dA: int, seed: int, profile: str = PROFILE_ALL) -> tuple[DensityMatrix, BlockState]:
    """Random marginal with a planted extension witness.

    profile "all" draws a Ginibre PSD block for every sector;
    "exclude-bosonic" leaves the top sector empty, so the witness is genuinely
    non-bosonic before conversion.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}, expected one of {PROFILES}")
    if not 1 <= int(dA) <= 4:
        raise ValueError(f"A dimension {dA} outside 1..4")
    diagrams = list_diagrams(k)
    if profile == PROFILE_EXCLUDE_BOSONIC:
        diagrams = diagrams[1:]
        if not diagrams:
            raise ValueError("profile exclude-bosonic needs k >= 2")
    rng = np.random.default_rng(seed)
    blocks = {}
    total = 0.0
    for lam in diagrams:
        n = dA * lam.num_weights
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        x = g @ g.conj().T
        blocks[lam] = x
        total += hook_dim(lam) * float(x.trace().real)
    blocks = {lam: x / total for lam, x in blocks.items()}
    bs = BlockState(k, dA, blocks)
    return marginal_from_blocks(bs), bs
