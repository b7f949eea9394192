"""Dense complex linear algebra on multipartite systems.

Operators are plain numpy arrays. A layout is a tuple of local dimensions;
subsystem 0 is the leftmost tensor factor and the most significant digit of a
computational basis index.
"""

from __future__ import annotations

from math import prod

import numpy as np

HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-10


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b."""
    a = np.asarray(a)
    b = np.asarray(b)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("tensor factors must have finite entries")
    return np.kron(a, b)


def tensor_many(*factors: np.ndarray) -> np.ndarray:
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = tensor_product(out, f)
    return out


def herm_deviation(m: np.ndarray) -> float:
    """Frobenius norm of the anti-Hermitian part of m."""
    m = np.asarray(m)
    return float(np.linalg.norm(m - m.conj().T)) / 2


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return herm_deviation(m) <= atol


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in keep.

    Kept subsystems appear in the result in their original order, so the map
    is linear and trace preserving.
    """
    m = np.asarray(m)
    dims = tuple(int(d) for d in dims)
    total = prod(dims)
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match layout {dims}")
    n = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"keep indices {keep} outside layout of {n} subsystems")
    t = m.reshape(dims + dims)
    keep_set = set(keep)
    ket = list(range(n))
    bra = [n + i if i in keep_set else i for i in range(n)]
    out_axes = keep + [n + i for i in keep]
    r = np.einsum(t, ket + bra, out_axes)
    dk = prod(dims[i] for i in keep)
    return r.reshape(dk, dk)


def partial_transpose(m: np.ndarray, dims, sys: int) -> np.ndarray:
    """Transpose one subsystem in place."""
    m = np.asarray(m)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if not 0 <= sys < n:
        raise ValueError(f"subsystem {sys} outside layout of {n} subsystems")
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[sys], axes[n + sys] = axes[n + sys], axes[sys]
    return t.transpose(axes).reshape(m.shape)


def permutation_operator(k: int, perm, local_dim: int = 2) -> np.ndarray:
    """Unitary 0/1 matrix sending the content of subsystem t to subsystem perm[t]."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm {perm} is not a bijection on 0..{k - 1}")
    d = int(local_dim)
    dim = d**k
    idx = np.arange(dim)
    digits = np.empty((k, dim), dtype=np.int64)
    rest = idx.copy()
    for t in range(k - 1, -1, -1):
        digits[t] = rest % d
        rest //= d
    target = np.zeros(dim, dtype=np.int64)
    for t in range(k):
        target += digits[t] * d ** (k - 1 - perm[t])
    p = np.zeros((dim, dim))
    p[target, idx] = 1.0
    return p


def adjacent_transposition(k: int, t: int) -> tuple[int, ...]:
    """Permutation tuple swapping subsystems t and t+1."""
    if not 0 <= t < k - 1:
        raise ValueError(f"transposition position {t} invalid for {k} subsystems")
    perm = list(range(k))
    perm[t], perm[t + 1] = perm[t + 1], perm[t]
    return tuple(perm)


def min_eigenvalue(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    h = np.asarray(h)
    dev = herm_deviation(h)
    if dev > atol:
        raise ValueError(f"input is not Hermitian (anti-Hermitian norm {dev:.3e})")
    return float(np.linalg.eigvalsh((h + h.conj().T) / 2)[0])


def psd_project(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Nearest positive semidefinite matrix in Frobenius norm (eigenvalue clip)."""
    h = np.asarray(h, dtype=complex)
    dev = herm_deviation(h)
    if dev > atol:
        raise ValueError(f"input is not Hermitian (anti-Hermitian norm {dev:.3e})")
    hh = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(hh)
    w = np.clip(w, 0.0, None)
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix from a Ginibre factor."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator with a layout.

    check_psd=False skips the eigenvalue check; callers use it when positivity
    is structural (for example a matrix assembled from PSD blocks).
    """

    def __init__(self, matrix, dims, *, atol: float = 1e-8, check_psd: bool = True):
        matrix = np.array(matrix, dtype=complex)
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid layout {dims}")
        total = prod(dims)
        if matrix.shape != (total, total):
            raise ValueError(f"matrix shape {matrix.shape} does not match layout {dims}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("matrix entries must be finite")
        dev = herm_deviation(matrix)
        if dev > atol:
            raise ValueError(f"matrix is not Hermitian within {atol:g} (deviation {dev:.3e})")
        matrix = (matrix + matrix.conj().T) / 2
        tr = float(matrix.trace().real)
        if abs(tr - 1.0) > atol:
            raise ValueError(f"trace {tr!r} is not 1 within {atol:g}")
        if check_psd:
            low = float(np.linalg.eigvalsh(matrix)[0])
            if low < -atol:
                raise ValueError(f"minimum eigenvalue {low:.3e} below -{atol:g}")
        matrix.flags.writeable = False
        self.matrix = matrix
        self.dims = dims

    @classmethod
    def from_ket(cls, ket, dims, *, atol: float = 1e-8) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(ket)
        if abs(nrm - 1.0) > atol:
            raise ValueError(f"ket norm {nrm!r} is not 1 within {atol:g}")
        return cls(np.outer(ket, ket.conj()), dims, atol=atol, check_psd=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def marginal(self, keep) -> np.ndarray:
        return partial_trace(self.matrix, self.dims, keep)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, dims={self.dims})"
