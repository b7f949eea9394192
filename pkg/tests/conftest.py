"""Shared fixtures and independent reference implementations.

The reference functions here deliberately use the dumbest possible
constructions (explicit index loops, full group sums) so the fast paths in
the package are checked against something with no shared code.
"""

import itertools

import numpy as np
import pytest

from symext import build_schur_basis


@pytest.fixture(scope="session")
def basis2():
    return build_schur_basis(2)


@pytest.fixture(scope="session")
def basis3():
    return build_schur_basis(3)


@pytest.fixture(scope="session")
def basis4():
    return build_schur_basis(4)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def naive_partial_trace(m, dims, keep):
    """Index-by-index partial trace, quadratic in the full dimension."""
    dims = list(dims)
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    out_dim = int(np.prod([dims[i] for i in keep], initial=1))
    out = np.zeros((out_dim, out_dim), dtype=complex)
    for row in itertools.product(*(range(d) for d in dims)):
        for col in itertools.product(*(range(d) for d in dims)):
            if any(row[i] != col[i] for i in traced):
                continue
            r = c = 0
            for i in keep:
                r = r * dims[i] + row[i]
                c = c * dims[i] + col[i]
            ri = int(np.ravel_multi_index(row, dims))
            ci = int(np.ravel_multi_index(col, dims))
            out[r, c] += m[ri, ci]
    return out


def full_group_average(m, k):
    """Average over all k! leg permutations of the B systems (A in front)."""
    from symext import permutation_operator
    from symext.linalg import tensor_product

    dA = m.shape[0] // 2**k
    acc = np.zeros_like(m)
    count = 0
    for perm in itertools.permutations(range(k)):
        op = tensor_product(np.eye(dA), permutation_operator(k, perm))
        acc += op @ m @ op.conj().T
        count += 1
    return acc / count


def singlet_state():
    from symext import DensityMatrix

    s = np.zeros((4, 4))
    s[1, 1] = s[2, 2] = 0.5
    s[1, 2] = s[2, 1] = -0.5
    return DensityMatrix(s, (2, 2))


def product_state(seed=5):
    from symext import DensityMatrix
    from symext.linalg import random_density, tensor_product

    gen = np.random.default_rng(seed)
    return DensityMatrix(tensor_product(random_density(2, gen), random_density(2, gen)), (2, 2))
