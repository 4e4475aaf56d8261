"""Explicit representatives of types in so(p, q).

Each indecomposable summand is built on ``W + NW + ... + N^k W`` where the
semisimple part acts on W by the normal form of its reduced type and N
shifts the components.  The bilinear form pairs ``N^i W`` with ``N^j W``
only when ``i + j = k``, through ``(-1)^i`` times the reduced form.  A final
change of basis brings the assembled form to ``diag(1,..,1,-1,..,-1)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..signature import DomainError, Signature
from .families import FamilyLabel, family_type_sum
from .types import IndecomposableType, Kind, TypeSum, _parts


def reduced_normal_form(t: IndecomposableType) -> tuple[np.ndarray, np.ndarray]:
    """(reduced form, semisimple action) on the generating block W."""
    re_, im_ = (float(x) for x in _parts(t.zeta))
    odd = t.height % 2 == 1
    if t.kind is Kind.ZERO:
        return np.array([[float(t.sign)]]), np.zeros((1, 1))
    if t.kind is Kind.REAL:
        a = re_
        S = np.array([[0.0, a], [a, 0.0]])
        G = np.array([[0.0, -1.0], [1.0, 0.0]]) if odd else np.diag([1.0, -1.0])
        return G, S
    if t.kind is Kind.IMAGINARY:
        b = im_
        S = np.array([[0.0, -b], [b, 0.0]])
        s = float(t.sign)
        G = np.array([[0.0, s], [-s, 0.0]]) if odd else s * np.eye(2)
        return G, S
    a, b = re_, im_
    # columns are the images S w_1, ..., S w_4
    S = np.array(
        [
            [0.0, -b, a, 0.0],
            [b, 0.0, 0.0, a],
            [a, 0.0, 0.0, -b],
            [0.0, a, b, 0.0],
        ]
    )
    if odd:
        G = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    else:
        G = np.diag([1.0, 1.0, -1.0, -1.0])
    return G, S


def indecomposable_block(t: IndecomposableType) -> tuple[np.ndarray, np.ndarray]:
    """(Gram matrix, operator) of one summand in its string basis."""
    G0, S0 = reduced_normal_form(t)
    k = t.height
    d = G0.shape[0]
    n = d * (k + 1)
    G = np.zeros((n, n))
    A = np.zeros((n, n))
    for i in range(k + 1):
        A[i * d : (i + 1) * d, i * d : (i + 1) * d] = S0
        if i < k:
            A[(i + 1) * d : (i + 2) * d, i * d : (i + 1) * d] = np.eye(d)
        j = k - i
        G[i * d : (i + 1) * d, j * d : (j + 1) * d] = (-1) ** i * G0
    if np.max(np.abs(A.T @ G + G @ A)) > 1e-12 or np.max(np.abs(G - G.T)) > 1e-12:
        raise DomainError(f"no normal form for {t}")
    return G, A


def type_sum_block(ts: TypeSum) -> tuple[np.ndarray, np.ndarray]:
    blocks = [indecomposable_block(t) for t in ts.summands]
    return scipy.linalg.block_diag(*(b[0] for b in blocks)), scipy.linalg.block_diag(*(b[1] for b in blocks))


def standardize(G: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Matrix of A in a basis where G becomes ``diag(+1.., -1..)``."""
    w, U = np.linalg.eigh(G)
    order = np.argsort(-np.sign(w), kind="stable")
    w, U = w[order], U[:, order]
    P = U / np.sqrt(np.abs(w))
    return np.linalg.solve(P, A @ P)


def canonical_representative(label: FamilyLabel | TypeSum, sig=Signature.SPLIT) -> np.ndarray:
    """Representative matrix in so(V, eta) of a family label or a type sum."""
    sig = Signature.parse(sig)
    ts = family_type_sum(label) if isinstance(label, FamilyLabel) else label
    if ts.dimension != 7:
        raise DomainError(f"type has dimension {ts.dimension}, expected 7")
    want = (7, 0) if sig is Signature.COMPACT else (3, 4)
    if ts.signature != want:
        raise DomainError(f"type has signature {ts.signature}, expected {want}")
    G, A = type_sum_block(ts)
    out = standardize(G, A)
    # exact zeros where the construction is exact keep fixtures tidy
    out[np.abs(out) < 1e-15] = 0.0
    return out
