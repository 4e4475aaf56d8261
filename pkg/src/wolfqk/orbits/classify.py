"""Splitting V into orthogonal indecomposable summands of ``A = S + N``.

Within each eigenvalue group of S the summands are peeled off from the
top height K down.  A generator p is picked where the form
``(u, w) -> <u, N^K w>`` is largest; the string ``p, Np, ..., N^K p`` (with
its partner string for the cross-paired kinds) spans a nondegenerate
A-invariant subspace, whose orthogonal complement is treated next.  The
sign of a self-paired summand is the sign of that form at p; for odd K the
imaginary case uses i times the (skew-Hermitian) form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy

from .. import lie
from ..signature import DomainError, Signature
from .jordan import (
    DEFAULT_TOL,
    IllConditionedError,
    SemisimpleNilpotentPair,
    _is_exact_input,
    height_tolerance,
    jordan_chevalley,
    nilpotent_height,
)
from .types import IndecomposableType, Kind, TypeSum

@dataclass(frozen=True)
class Summand:
    """One indecomposable piece of a decomposition.

    ``basis`` spans the summand, ``generator`` spans W and
    ``reduced_gram[i, j] = <w_i, N^k w_j>`` on the generator columns.
    """

    type: IndecomposableType
    basis: np.ndarray
    generator: np.ndarray
    reduced_gram: np.ndarray


@dataclass(frozen=True)
class Decomposition:
    pair: SemisimpleNilpotentPair
    summands: tuple[Summand, ...]
    sig: Signature

    @property
    def type_sum(self) -> TypeSum:
        return TypeSum(tuple(s.type for s in self.summands))


def _null_space(M: np.ndarray, dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((M.shape[1], 0), dtype=M.dtype)
    _, _, Vh = np.linalg.svd(M)
    return Vh[-dim:].conj().T


def _orthonormal(X: np.ndarray, dim: int) -> np.ndarray:
    U, _, _ = np.linalg.svd(X, full_matrices=False)
    return U[:, :dim]


def _string(N: np.ndarray, p: np.ndarray, K: int) -> list[np.ndarray]:
    out = [p]
    for _ in range(K):
        out.append(N @ out[-1])
    return out


def _realify(vectors: list[np.ndarray]) -> list[np.ndarray]:
    out = []
    for v in vectors:
        out.extend([v.real, v.imag])
    return out


def _group_key(c) -> tuple[float, float]:
    return (abs(c.center.real), abs(c.center.imag))


def _peel_group(S, N, eta, U, a, b, exact_zeta, height_tol):
    """Summands carried by one eigenvalue group (normalised units)."""
    if a == 0 and b == 0:
        kind, per = Kind.ZERO, 1
    elif b == 0:
        kind, per = Kind.REAL, 2
    elif a == 0:
        kind, per = Kind.IMAGINARY, 2
    else:
        kind, per = Kind.QUADRUPLE, 4
    out = []
    while U.shape[1] > 0:
        m = U.shape[1]
        NU = U.T @ N @ U
        SU = U.T @ S @ U
        K = nilpotent_height(NU, height_tol)
        NK = np.linalg.matrix_power(N, K)
        if kind is Kind.ZERO:
            B = U.T @ eta @ NK @ U
            if K % 2 == 0:
                w, X = np.linalg.eigh(0.5 * (B + B.T))
                j = int(np.argmax(np.abs(w)))
                p = U @ X[:, j]
                gens = [p]
                t = IndecomposableType(Kind.ZERO, K, 0, 1 if w[j] > 0 else -1)
            else:
                u, _, vh = np.linalg.svd(0.5 * (B - B.T))
                gens = [U @ u[:, 0], U @ vh[0]]
                t = IndecomposableType(Kind.REAL, K, 0.0 if exact_zeta is None else exact_zeta)
            vecs = [v for g in gens for v in _string(N, g, K)]
        elif kind is Kind.REAL:
            Ep = U @ _null_space(SU - a * np.eye(m), m // 2)
            Em = U @ _null_space(SU + a * np.eye(m), m // 2)
            u, _, vh = np.linalg.svd(Ep.T @ eta @ NK @ Em)
            gens = [Ep @ u[:, 0], Em @ vh[0]]
            vecs = [v for g in gens for v in _string(N, g, K)]
            t = IndecomposableType(Kind.REAL, K, a if exact_zeta is None else exact_zeta)
        elif kind is Kind.IMAGINARY:
            E = U @ _null_space(SU - 1j * b * np.eye(m), m // 2)
            H = E.conj().T @ eta @ NK @ E
            if K % 2:
                H = 1j * H
            w, X = np.linalg.eigh(0.5 * (H + H.conj().T))
            j = int(np.argmax(np.abs(w)))
            p = E @ X[:, j]
            gens = _realify([p])
            vecs = _realify(_string(N, p, K))
            t = IndecomposableType(Kind.IMAGINARY, K, 1j * b if exact_zeta is None else exact_zeta, 1 if w[j] > 0 else -1)
        else:
            z = complex(a, b)
            Ep = U @ _null_space(SU - z * np.eye(m), m // 4)
            Em = U @ _null_space(SU + z * np.eye(m), m // 4)
            u, _, vh = np.linalg.svd(Ep.T @ eta @ NK @ Em)
            p, q = Ep @ u[:, 0].conj(), Em @ vh[0].conj()
            gens = _realify([p, q])
            vecs = _realify(_string(N, p, K) + _string(N, q, K))
            t = IndecomposableType(Kind.QUADRUPLE, K, z if exact_zeta is None else exact_zeta)
        d = t.dimension
        if d > m:
            raise IllConditionedError(f"summand of dimension {d} does not fit in a group of dimension {m}", 0.0)
        X = _orthonormal(np.column_stack(vecs), d)
        G = np.column_stack(gens)
        out.append((t, X, G, G.T @ eta @ NK @ G))
        U = U @ _null_space(X.T @ eta @ U, m - d)
    return out, per


def _scaled(t: IndecomposableType, scale: float, exact: bool) -> IndecomposableType:
    if exact or t.kind is Kind.ZERO:
        return t
    return IndecomposableType(t.kind, t.height, complex(t.zeta) * scale, t.sign)


def decompose(A, sig, tol: float = DEFAULT_TOL) -> Decomposition:
    """Orthogonal decomposition of ``V`` into indecomposable A-invariant summands."""
    sig = Signature.parse(sig)
    exact = _is_exact_input(A)
    Af = np.array(sympy.Matrix(A).evalf(), dtype=float) if exact else np.asarray(A, dtype=float)
    lie.check_algebra(Af, sig)
    pair = jordan_chevalley(A if exact else Af, tol)
    eta = sig.eta
    n = Af.shape[0]
    if pair.scale == 0.0:
        summands = []
        for i in range(n):
            e = np.zeros((n, 1))
            e[i] = 1.0
            t = IndecomposableType(Kind.ZERO, 0, 0, int(eta[i, i]))
            summands.append(Summand(t, e, e, np.array([[eta[i, i]]])))
        return Decomposition(pair, tuple(summands), sig)
    S = pair.S / pair.scale
    N = pair.N / pair.scale
    groups: dict[tuple[float, float], list] = {}
    for c in pair.clusters:
        groups.setdefault(_group_key(c), []).append(c)
    summands = []
    for (a_s, b_s), cl in sorted(groups.items()):
        a, b = a_s / pair.scale, b_s / pair.scale
        dim = sum(c.multiplicity for c in cl)
        if a == 0 and b == 0:
            q = S
        elif b == 0:
            q = S @ S - a * a * np.eye(n)
        elif a == 0:
            q = S @ S + b * b * np.eye(n)
        else:
            S2 = S @ S
            q = S2 @ S2 - 2 * (a * a - b * b) * S2 + (a * a + b * b) ** 2 * np.eye(n)
        U = _null_space(q, dim)
        exact_zeta = _exact_zeta(cl) if exact else None
        pieces, _ = _peel_group(S, N, eta, U, a, b, exact_zeta, height_tolerance(tol))
        for t, X, G, R in pieces:
            summands.append(Summand(_scaled(t, pair.scale, exact), X, G, R * pair.scale ** t.height))
    return Decomposition(pair, tuple(summands), sig)


def _exact_zeta(clusters):
    roots = [c.exact for c in clusters if c.exact is not None]
    for r in roots:
        re_, im_ = r.as_real_imag()
        if re_ >= 0 and im_ >= 0:
            return sympy.nsimplify(r)
    return sympy.nsimplify(roots[0]) if roots else None


def classify(A, sig=Signature.SPLIT, tol: float = DEFAULT_TOL) -> TypeSum:
    """Type of the adjoint orbit of A as a sum of indecomposable types."""
    sig = Signature.parse(sig)
    dec = decompose(A, sig, tol)
    ts = dec.type_sum
    want = (7, 0) if sig is Signature.COMPACT else (3, 4)
    if ts.dimension != 7 or ts.signature != want:
        raise IllConditionedError(f"decomposition produced {ts} with signature {ts.signature}", dec.pair.gap)
    return ts


def classify_compact(A) -> tuple[float, float, float]:
    """Sorted rotation rates (a, b, c) of a skew-symmetric 7x7 matrix."""
    A = np.asarray(A, dtype=float)
    if A.shape != (7, 7):
        raise DomainError("expected a 7x7 matrix")
    if np.max(np.abs(A + A.T)) > 1e-9 * max(1.0, float(np.max(np.abs(A)))):
        raise DomainError("matrix is not skew-symmetric")
    w = np.linalg.eigvalsh(1j * 0.5 * (A - A.T))
    rates = np.clip(np.sort(w)[-3:], 0.0, None)
    return tuple(float(r) for r in rates)
