"""Linear algebra of SO(7) and SO_0(3,4).

Matrices act on column vectors of V = R^7 or R^{3,4}; the metric is
``eta = diag(1, 1, 1, e, e, e, e)`` with ``e = +1`` or ``-1``.  The isotropy
algebra ``h = so(3) + so(4)`` is block diagonal, ``m`` is the off-diagonal
3x4 block, and ``so(4) = s + sp(1)'`` splits into two commuting ideals.

Inner products on the Lie algebra use ``<A, B> = -tr(AB) / 2``, which is a
fixed positive multiple of minus the Killing form.  Values of the moment map
live in R^3 through the coordinates of ``s`` defined here.
"""

from __future__ import annotations

import functools
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .signature import DomainError, Signature

_H3 = slice(0, 3)
_H4 = slice(3, 7)


def eta(sig) -> np.ndarray:
    return Signature.parse(sig).eta


def is_skew_adjoint(A, sig, tol: float = 1e-12) -> bool:
    A = np.asarray(A)
    if A.shape != (7, 7):
        return False
    e = eta(sig)
    return float(np.max(np.abs(A.T @ e + e @ A))) <= tol


def project_algebra(X, sig) -> np.ndarray:
    """Nearest element of so(V, eta) in the Frobenius sense."""
    e = eta(sig)
    X = np.asarray(X, dtype=float)
    return 0.5 * (X - e @ X.T @ e)


def check_algebra(A, sig, tol: float = 1e-9) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape != (7, 7):
        raise DomainError(f"expected a 7x7 matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if not is_skew_adjoint(A, sig, tol * scale):
        raise DomainError(f"matrix is not in so({Signature.parse(sig)})")
    return A


@functools.lru_cache(maxsize=None)
def _basis(sig: Signature) -> tuple[np.ndarray, ...]:
    e = np.diag(sig.eta)
    out = []
    for i in range(7):
        for j in range(i + 1, 7):
            E = np.zeros((7, 7))
            E[i, j] = 1.0
            E[j, i] = -e[i] * e[j]
            E.setflags(write=False)
            out.append(E)
    return tuple(out)


def algebra_basis(sig) -> list[np.ndarray]:
    """The 21 elementary matrices ``E_ij - eta_i eta_j E_ji`` (i < j)."""
    return list(_basis(Signature.parse(sig)))


_IU = np.triu_indices(7, 1)


def algebra_coordinates(X) -> np.ndarray:
    """Coordinates of X in :func:`algebra_basis` (the strict upper triangle)."""
    return np.asarray(X)[..., _IU[0], _IU[1]]


def from_coordinates(c, sig) -> np.ndarray:
    return np.tensordot(np.asarray(c, dtype=float), np.array(_basis(Signature.parse(sig))), axes=1)


def bracket(A, B) -> np.ndarray:
    return A @ B - B @ A


def ad_matrix(A, sig) -> np.ndarray:
    """21x21 matrix of ``ad(A)`` in algebra coordinates."""
    basis = _basis(Signature.parse(sig))
    return np.stack([algebra_coordinates(bracket(A, E)) for E in basis], axis=1)


def group_inverse(g, sig) -> np.ndarray:
    """Inverse of an isometry: ``eta g^T eta``."""
    e = eta(sig)
    return e @ np.asarray(g).T @ e


def Ad(g, A, sig=None) -> np.ndarray:
    """``g A g^{-1}``; with ``sig`` the isometry inverse is used."""
    g = np.asarray(g, dtype=float)
    ginv = np.linalg.inv(g) if sig is None else group_inverse(g, sig)
    return g @ A @ ginv


def Ad_inv(g, A, sig) -> np.ndarray:
    """``g^{-1} A g``."""
    return group_inverse(g, sig) @ A @ g


def exp(A, t: float = 1.0) -> np.ndarray:
    """Group exponential ``exp(tA)`` (scaling and squaring, Pade)."""
    return scipy.linalg.expm(t * np.asarray(A, dtype=float))


def is_group_element(g, sig, tol: float = 1e-10) -> bool:
    g = np.asarray(g, dtype=float)
    e = eta(sig)
    if g.shape != (7, 7):
        return False
    return float(np.max(np.abs(g.T @ e @ g - e))) <= tol and abs(np.linalg.det(g) - 1.0) <= tol * 10


def in_identity_component(g, sig) -> bool:
    """For SO(3,4): the upper-left 3x3 block has positive determinant."""
    sig = Signature.parse(sig)
    if sig is Signature.COMPACT:
        return True
    return bool(np.linalg.det(np.asarray(g)[_H3, _H3]) > 0)


def random_algebra_element(sig, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Algebra element with i.i.d. normal coordinates, rescaled to Frobenius norm ``scale``."""
    c = rng.normal(size=21)
    X = from_coordinates(c, sig)
    return X * (scale / np.linalg.norm(X))


def random_group_element(sig, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return exp(random_algebra_element(sig, rng, scale))


def killing(A, B) -> float:
    """``<A, B> = -tr(AB) / 2``; Ad-invariant, positive on compact blocks."""
    return -0.5 * float(np.einsum("ij,ji->", A, B))


def riemannian_inner(A, B) -> float:
    """Left-invariant Riemannian metric ``tr(A^T B) / 2`` on the group.

    Agrees with :func:`killing` on ``h``; on ``m`` it agrees in the compact
    case and is its negative in the split case.
    """
    return 0.5 * float(np.einsum("ij,ij->", A, B))


# --- two-forms -------------------------------------------------------------


def matrix_to_two_form(A, sig) -> np.ndarray:
    """F(A): the skew matrix ``W[i, j] = <A e_i, e_j>_V``."""
    return np.asarray(A, dtype=float).T @ eta(sig)


def two_form_to_matrix(W, sig) -> np.ndarray:
    """Inverse of :func:`matrix_to_two_form`."""
    W = np.asarray(W, dtype=float)
    if W.shape != (7, 7) or np.max(np.abs(W + W.T)) > 1e-12 * max(1.0, np.max(np.abs(W))):
        raise DomainError("a two-form must be a skew-symmetric 7x7 matrix")
    return eta(sig) @ W.T


def canonical_vector_field(x, sig) -> np.ndarray:
    """``A_x = F^{-1}(i_x phi)`` for x in V."""
    sig = Signature.parse(sig)
    x = np.asarray(x, dtype=float)
    if x.shape != (7,):
        raise DomainError("x must have 7 coordinates")
    W = np.tensordot(x, _phi(sig), axes=1)
    return two_form_to_matrix(W, sig)


@functools.lru_cache(maxsize=None)
def _phi(sig: Signature) -> np.ndarray:
    from .algebra import associative_tensor

    t = associative_tensor(sig).astype(float)
    t.setflags(write=False)
    return t


# --- the sp(1) factor s ------------------------------------------------------


def _block_generator(p: int, q: int) -> np.ndarray:
    E = np.zeros((7, 7))
    E[3 + p, 3 + q] = 1.0
    E[3 + q, 3 + p] = -1.0
    return E


def _sp1_triple(self_dual: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s = 1.0 if self_dual else -1.0
    return (
        _block_generator(0, 1) + s * _block_generator(2, 3),
        _block_generator(0, 2) - s * _block_generator(1, 3),
        _block_generator(0, 3) + s * _block_generator(1, 2),
    )


def explicit_moment_components(W, g) -> np.ndarray:
    """``(w(f1,f2)+w(f3,f4), w(f1,f3)-w(f2,f4), w(f1,f4)+w(f2,f3))``.

    ``f1..f4`` are the last four columns of g and ``W`` the matrix of w.
    """
    F = np.asarray(g, dtype=float)[:, _H4]
    P = F.T @ np.asarray(W, dtype=float) @ F
    return np.array([P[0, 1] + P[2, 3], P[0, 2] - P[1, 3], P[0, 3] + P[1, 2]])


class _Sp1Convention(NamedTuple):
    self_dual: bool
    orientation: float
    basis: tuple[np.ndarray, np.ndarray, np.ndarray]


def _coords(X, conv: _Sp1Convention) -> np.ndarray:
    return conv.orientation * np.array([killing(X, J) for J in conv.basis])


@functools.lru_cache(maxsize=None)
def sp1_convention(sig) -> _Sp1Convention:
    """Pin which sp(1) factor of so(4) is ``s`` and how it is read as R^3.

    The choice is the unique one among the two factors and two orientations
    under which ``(Ad_g^{-1} F^{-1}(w))_s`` equals the explicit component
    formula on a fixed sample; anything else is a hard error.
    """
    sig = Signature.parse(sig)
    rng = np.random.default_rng(20260)
    sample = []
    for _ in range(8):
        W = rng.normal(size=(7, 7))
        W = W - W.T
        g = random_group_element(sig, rng, scale=1.5)
        sample.append((W, g))
    matches = []
    for self_dual in (True, False):
        for orientation in (1.0, -1.0):
            conv = _Sp1Convention(self_dual, orientation, _sp1_triple(self_dual))
            worst = 0.0
            for W, g in sample:
                B = Ad_inv(g, two_form_to_matrix(W, sig), sig)
                worst = max(worst, float(np.max(np.abs(_coords(B, conv) - explicit_moment_components(W, g)))))
            if worst < 1e-10:
                matches.append(conv)
    if len(matches) != 1:
        raise RuntimeError(f"could not pin the sp(1) convention for {sig}: {len(matches)} candidates")
    return matches[0]


def s_basis(sig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return sp1_convention(sig).basis


def sp1_coordinates(X, sig) -> np.ndarray:
    """R^3 coordinates of the s-component of X."""
    return _coords(X, sp1_convention(sig))


def sp1_to_matrix(mu, sig) -> np.ndarray:
    conv = sp1_convention(sig)
    mu = np.asarray(mu, dtype=float)
    # each J_k has <J_k, J_k> = 2
    return conv.orientation * 0.5 * sum(m * J for m, J in zip(mu, conv.basis))


def project_s(X, sig) -> np.ndarray:
    return sp1_to_matrix(sp1_coordinates(X, sig), sig)


def project_h(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.zeros_like(X)
    out[_H3, _H3] = X[_H3, _H3]
    out[_H4, _H4] = X[_H4, _H4]
    return out


def project_m(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X - project_h(X)


def project_h_prime(X, sig) -> np.ndarray:
    return project_h(X) - project_s(X, sig)


class SplitParts(NamedTuple):
    """``A = h_prime + s_matrix + m_matrix``.

    ``s`` holds the R^3 coordinates of ``s_matrix`` and ``m`` the upper
    3x4 off-diagonal block of ``m_matrix``.
    """

    h_prime: np.ndarray
    s_matrix: np.ndarray
    s: np.ndarray
    m_matrix: np.ndarray
    m: np.ndarray

    def reassemble(self) -> np.ndarray:
        return self.h_prime + self.s_matrix + self.m_matrix


def split(A, sig) -> SplitParts:
    A = np.asarray(A, dtype=float)
    s = sp1_coordinates(A, sig)
    s_mat = sp1_to_matrix(s, sig)
    m_mat = project_m(A)
    h_prime = project_h(A) - s_mat
    return SplitParts(h_prime, s_mat, s, m_mat, m_mat[_H3, _H4].copy())


def m_norm(X) -> float:
    """Positive norm of the m-component: the Frobenius norm of its 3x4 block.

    Equals ``sqrt(|<X_m, X_m>|)`` in both signatures.
    """
    return float(np.linalg.norm(np.asarray(X)[_H3, _H4]))
