"""Coupled spin basis of k qubits and the marginal coefficient tables.

The basis is built by coupling one spin-1/2 at a time with standard
Clebsch-Gordan coefficients (Condon-Shortley phases). Each basis vector is
labelled by a two-row sector, a coupling path, and a total J_z weight. In
this basis every permutation of the qubits is block diagonal over
(sector, weight), and for a fixed sector the block is the same matrix for
every weight, which is what makes per-sector block coordinates well defined.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, sqrt

import numpy as np

from .caps import full_space_cap
from .young import YoungDiagram, coupling_paths, list_diagrams


def _cg(j: float, m: float, s: float, up: bool) -> float:
    # <j, m-s; 1/2, s | j +- 1/2, m> with Condon-Shortley phases
    if up:
        if s > 0:
            return sqrt((j + m + 0.5) / (2 * j + 1))
        return sqrt((j - m + 0.5) / (2 * j + 1))
    if s > 0:
        return -sqrt((j - m + 0.5) / (2 * j + 1))
    return sqrt((j + m + 0.5) / (2 * j + 1))


class SchurBasis:
    """Orthonormal coupled basis of (C^2)^(x k), grouped into sectors.

    Columns of `matrix` are ordered by sector (first row decreasing), then
    coupling path (lexicographic), then weight (ascending). `sector(lam)`
    returns the same data as an array of shape (2^k, paths, weights).
    """

    def __init__(self, k: int, sectors, paths):
        self.k = int(k)
        self.diagrams = list_diagrams(self.k)
        self.paths = paths
        self._sectors = sectors
        cols = []
        offsets = {}
        at = 0
        for lam in self.diagrams:
            arr = sectors[lam]
            _, d, nw = arr.shape
            offsets[lam] = at
            cols.append(arr.reshape(2**self.k, d * nw))
            at += d * nw
            arr.flags.writeable = False
        self.matrix = np.concatenate(cols, axis=1)
        self.matrix.flags.writeable = False
        self._offsets = offsets

    def sector(self, lam: YoungDiagram) -> np.ndarray:
        """Basis vectors of one sector, shape (2^k, paths, weights)."""
        return self._sectors[lam]

    def column_range(self, lam: YoungDiagram) -> slice:
        """Columns of `matrix` holding the sector, path major, weight minor."""
        off = self._offsets[lam]
        return slice(off, off + len(self.paths[lam]) * lam.num_weights)

    def vector(self, lam: YoungDiagram, mu: int, omega: float) -> np.ndarray:
        return self._sectors[lam][:, mu, lam.weight_index(omega)].copy()

    def __repr__(self):
        return f"SchurBasis(k={self.k}, sectors={len(self.diagrams)})"


def build_schur_basis(k: int) -> SchurBasis:
    """Couple k spin-1/2 systems one at a time into the sector basis."""
    cap = full_space_cap()
    if not 1 <= k <= cap:
        raise ValueError(f"k={k} outside 1..{cap} (set SYMEXT_MAX_K to change the cap)")
    return _build_schur_basis_cached(k)


@lru_cache(maxsize=8)
def _build_schur_basis_cached(k: int) -> SchurBasis:
    # level maps each coupling path to an array with one column per weight
    level: dict[tuple[float, ...], np.ndarray] = {(0.5,): np.eye(2)}
    for _ in range(k - 1):
        grown: dict[tuple[float, ...], np.ndarray] = {}
        for path, mat in level.items():
            j = path[-1]
            dim = mat.shape[0]
            for up in (False, True):
                jn = j + 0.5 if up else j - 0.5
                if jn < 0:
                    continue
                nw = int(round(2 * jn)) + 1
                out = np.zeros((2 * dim, nw))
                for mi in range(nw):
                    m = -jn + mi
                    for s, bit in ((-0.5, 0), (0.5, 1)):
                        m_old = m - s
                        if abs(m_old) > j + 1e-9:
                            continue
                        c = _cg(j, m, s, up)
                        if c != 0.0:
                            # appending qubit t+1 as the least significant digit
                            out[bit::2, mi] += c * mat[:, int(round(m_old + j))]
                grown[path + (jn,)] = out
        level = grown
    grouped = coupling_paths(k)
    sectors = {
        lam: np.stack([level[p] for p in paths], axis=1) for lam, paths in grouped.items()
    }
    return SchurBasis(k, sectors, grouped)


def dicke(k: int, omega: float) -> np.ndarray:
    """Uniform superposition over computational states with k/2 + omega ones."""
    n1 = omega + k / 2
    n1i = int(round(n1))
    if abs(n1i - n1) > 1e-9 or not 0 <= n1i <= k:
        raise ValueError(f"weight {omega} invalid for {k} qubits")
    if k > full_space_cap():
        raise ValueError(f"k={k} above the full-space cap {full_space_cap()}")
    v = np.zeros(2**k)
    for ones in itertools.combinations(range(k), n1i):
        v[sum(1 << b for b in ones)] = 1.0
    return v / sqrt(comb(k, n1i))


def dicke_isometry(k: int) -> np.ndarray:
    """Isometry from the k+1 weight slots onto the symmetric subspace."""
    return np.stack([dicke(k, -k / 2 + s) for s in range(k + 1)], axis=1)


def jplus_apply(v: np.ndarray, k: int) -> np.ndarray:
    """Total raising map: flip each 0 to 1, summed over positions."""
    v = np.asarray(v)
    if v.shape != (2**k,):
        raise ValueError(f"vector shape {v.shape} does not match {k} qubits")
    out = np.zeros(2**k, dtype=np.result_type(v.dtype, float))
    idx = np.arange(2**k)
    for b in range(k):
        src = idx[(idx >> b) & 1 == 0]
        out[src + (1 << b)] += v[src]
    return out


def _resolve_k(lam: YoungDiagram, k: int | None) -> int:
    if k is None:
        return lam.k
    if k != lam.k:
        raise ValueError(f"k={k} inconsistent with sector [{lam.lambda1},{lam.lambda2}]")
    return k


def alpha_coeff(lam: YoungDiagram, omega: float, omega_p: float, k: int | None = None) -> float:
    """Off-diagonal one-qubit marginal coefficient of a sector cross term.

    The averaged cross term between weights omega and omega_p of a sector
    traces down to alpha * |0><1| on one qubit; alpha vanishes unless
    omega_p = omega + 1.
    """
    k = _resolve_k(lam, k)
    j = lam.spin
    if abs(omega_p - omega - 1.0) > 1e-9:
        return 0.0
    lam.weight_index(omega)
    lam.weight_index(omega_p)
    return sqrt((j - omega) * (j + omega + 1)) / k


def diag_coeffs(k: int, omega: float) -> tuple[float, float]:
    """Diagonal one-qubit marginal (t0, t1) of an averaged weight term."""
    t0 = (k - 2 * omega) / (2 * k)
    t1 = (k + 2 * omega) / (2 * k)
    if t0 < -1e-12 or t1 < -1e-12:
        raise ValueError(f"weight {omega} outside -k/2..k/2 for k={k}")
    return t0, t1


def p_coeff(lam: YoungDiagram, omega: float, omega_p: float, k: int | None = None) -> float:
    """Entrywise rescaling factor between a sector and the top sector.

    Equals 1 on the diagonal; for adjacent weights it is the ratio of the
    alpha coefficient of the sector to that of the top sector, evaluated at
    the lesser weight; all remaining entries factor through the xi vector.
    """
    k = _resolve_k(lam, k)
    iw = lam.weight_index(omega)
    iw_p = lam.weight_index(omega_p)
    if iw == iw_p:
        return 1.0
    if abs(iw - iw_p) == 1:
        j = lam.spin
        lo = min(omega, omega_p)
        num = (j - lo) * (j + lo + 1)
        den = (k / 2 - lo) * (k / 2 + lo + 1)
        return sqrt(num / den)
    xi = xi_vector(lam, k)
    return float(xi[iw] * xi[iw_p])


def xi_vector(lam: YoungDiagram, k: int | None = None) -> np.ndarray:
    """Unit-bounded amplitudes whose pairwise products fill the rescaling matrix.

    Anchored at the adjacent weight pair with the largest rescaling factor and
    extended outward by the two-term recursion; the factors are unimodal in the
    weight, which keeps every amplitude at most 1.
    """
    k = _resolve_k(lam, k)
    nw = lam.num_weights
    if nw == 1:
        return np.ones(1)
    ws = lam.weights()
    p_adj = np.array([p_coeff(lam, ws[i], ws[i + 1], k) for i in range(nw - 1)])
    xi = np.zeros(nw)
    anchor = int(np.argmax(p_adj))
    xi[anchor] = xi[anchor + 1] = sqrt(p_adj[anchor])
    for i in range(anchor - 1, -1, -1):
        xi[i] = p_adj[i] / xi[i + 1]
    for i in range(anchor + 2, nw):
        xi[i] = p_adj[i - 1] / xi[i - 1]
    if np.any(xi > 1 + 1e-9):
        raise ArithmeticError(f"xi recursion produced an amplitude above 1 for [{lam.lambda1},{lam.lambda2}]")
    return xi


def coeff_matrix_P(lam: YoungDiagram, k: int | None = None) -> np.ndarray:
    """Unit-diagonal PSD rescaling matrix xi xi^T + diag(1 - xi^2)."""
    k = _resolve_k(lam, k)
    xi = xi_vector(lam, k)
    p = np.outer(xi, xi) + np.diag(1.0 - xi**2)
    if lam.num_weights >= 2:
        ws = lam.weights()
        for i in range(lam.num_weights - 1):
            p[i, i + 1] = p[i + 1, i] = p_coeff(lam, ws[i], ws[i + 1], k)
    return p


def export_basis(basis: SchurBasis) -> str:
    """Text dump, one line per basis vector: rows | path | weight | amplitudes."""
    lines = []
    for lam in basis.diagrams:
        sec = basis.sector(lam)
        ws = lam.weights()
        for mu, path in enumerate(basis.paths[lam]):
            path_txt = ",".join(format(x, "g") for x in path)
            for iw, w in enumerate(ws):
                amps = " ".join(f"{a:.17g}{0.0:+.17g}i" for a in sec[:, mu, iw])
                lines.append(f"{lam.lambda1},{lam.lambda2} | {path_txt} | {format(w, 'g')} | {amps}")
    return "\n".join(lines) + "\n"
