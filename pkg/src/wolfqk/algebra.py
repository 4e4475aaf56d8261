"""Octonions and split octonions built by Cayley-Dickson doubling of H.

An element is stored as 8 coordinates on the basis ``e0 = (1, 0)``,
``e_k = (I_k, 0)``, ``e4 = (0, 1)``, ``e_{k+4} = (0, I_k)`` (k = 1, 2, 3).
The octonions use the doubling ``(a, b)(c, d) = (ac - d*b, da + bc*)`` with
norm ``|a| + |b|``; the split octonions flip the sign of the ``d*b`` term and
of the second norm summand.

All array routines act on the last axis and are dtype-agnostic: float arrays
give IEEE results, integer or ``Fraction`` object arrays give exact ones.
"""

from __future__ import annotations

import functools
import json
from fractions import Fraction
from importlib import resources
from typing import NamedTuple

import numpy as np

from .signature import DomainError, Signature

# quaternion units I1, I2, I3 with I1 I2 = I3 cyclic
_QUAT_CYCLES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _quaternion_basis_product(i: int, j: int) -> tuple[int, int]:
    if i == 0:
        return 1, j
    if j == 0:
        return 1, i
    if i == j:
        return -1, 0
    for a, b, c in _QUAT_CYCLES:
        if (i, j) == (a, b):
            return 1, c
        if (i, j) == (b, a):
            return -1, c
    raise AssertionError((i, j))


def _qvec(sign: int, k: int) -> np.ndarray:
    v = np.zeros(4, dtype=np.int64)
    v[k] = sign
    return v


def _qmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros(4, dtype=np.int64)
    for i in range(4):
        for j in range(4):
            if x[i] and y[j]:
                s, k = _quaternion_basis_product(i, j)
                out[k] += s * x[i] * y[j]
    return out


def _qconj(x: np.ndarray) -> np.ndarray:
    return np.array([x[0], -x[1], -x[2], -x[3]])


def derive_multiplication_table(sig) -> tuple[np.ndarray, np.ndarray]:
    """Expand the doubling formula over the quaternion table.

    Returns ``(sign, index)``, two 8x8 integer arrays with
    ``e_i e_j = sign[i, j] * e_{index[i, j]}``.
    """
    eps = Signature.parse(sig).epsilon
    sign = np.zeros((8, 8), dtype=np.int64)
    index = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        for j in range(8):
            a = _qvec(1, i) if i < 4 else np.zeros(4, dtype=np.int64)
            b = _qvec(1, i - 4) if i >= 4 else np.zeros(4, dtype=np.int64)
            c = _qvec(1, j) if j < 4 else np.zeros(4, dtype=np.int64)
            d = _qvec(1, j - 4) if j >= 4 else np.zeros(4, dtype=np.int64)
            first = _qmul(a, c) - eps * _qmul(_qconj(d), b)
            second = _qmul(d, a) + _qmul(b, _qconj(c))
            prod = np.concatenate([first, second])
            (nz,) = np.nonzero(prod)
            assert len(nz) == 1 and abs(prod[nz[0]]) == 1
            index[i, j] = nz[0]
            sign[i, j] = prod[nz[0]]
    return sign, index


def table_to_json(sig) -> dict:
    sig = Signature.parse(sig)
    sign, index = derive_multiplication_table(sig)
    rows = [
        [{"sign": int(sign[i, j]), "basis": int(index[i, j])} for j in range(8)]
        for i in range(8)
    ]
    return {"algebra": sig.algebra_name, "table": rows}


def _table_from_json(doc: dict) -> tuple[np.ndarray, np.ndarray]:
    sign = np.array([[c["sign"] for c in row] for row in doc["table"]], dtype=np.int64)
    index = np.array([[c["basis"] for c in row] for row in doc["table"]], dtype=np.int64)
    return sign, index


@functools.lru_cache(maxsize=None)
def golden_table(sig) -> tuple[np.ndarray, np.ndarray]:
    """Multiplication table read from the frozen JSON fixture."""
    sig = Signature.parse(sig)
    name = f"multiplication_{sig.algebra_name}.json"
    text = resources.files("wolfqk.data").joinpath(name).read_text()
    doc = json.loads(text)
    if doc["algebra"] != sig.algebra_name:
        raise ValueError(f"fixture {name} is for algebra {doc['algebra']}")
    sign, index = _table_from_json(doc)
    sign.setflags(write=False)
    index.setflags(write=False)
    return sign, index


def norm_weights(sig) -> np.ndarray:
    eps = Signature.parse(sig).epsilon
    return np.array([1, 1, 1, 1, eps, eps, eps, eps], dtype=np.int64)


def _as_array(x) -> np.ndarray:
    x = np.asarray(x)
    if x.dtype.kind not in "iufcO":
        raise DomainError(f"cannot use dtype {x.dtype} as algebra coordinates")
    return x


def _zeros_like_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    shape = np.broadcast_shapes(x.shape, y.shape)
    dtype = np.result_type(x, y)
    if dtype == object:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=dtype)


def multiply(x, y, sig) -> np.ndarray:
    """Product in O(V); ``x`` and ``y`` have last axis of length 8."""
    x, y = _as_array(x), _as_array(y)
    if x.shape[-1] != 8 or y.shape[-1] != 8:
        raise DomainError("algebra elements need 8 coordinates")
    sign, index = golden_table(sig)
    out = _zeros_like_product(x, y)
    for i in range(8):
        xi = x[..., i]
        for j in range(8):
            out[..., index[i, j]] += sign[i, j] * (xi * y[..., j])
    return out


def conjugate(x) -> np.ndarray:
    x = _as_array(x)
    out = -x
    out[..., 0] = x[..., 0]
    return out


def inner(x, y, sig) -> np.ndarray:
    """Polarisation of the algebra norm."""
    x, y = _as_array(x), _as_array(y)
    return np.sum(norm_weights(sig) * x * y, axis=-1)


def norm(x, sig) -> np.ndarray:
    """Quadratic norm: signature (8, 0) for O and (4, 4) for split O."""
    return inner(x, x, sig)


def associator(x, y, z, sig) -> np.ndarray:
    """``(xy)z - x(yz)``."""
    return multiply(multiply(x, y, sig), z, sig) - multiply(x, multiply(y, z, sig), sig)


def moufang_residuals(x, y, z, sig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Residuals of the three Moufang identities.

    ``(xyx)z - x(y(xz))``, ``z(xyx) - ((zx)y)x`` and ``(xy)(zx) - x(yz)x``.
    ``xyx`` is unambiguous by flexibility; it is evaluated as ``(xy)x``.
    """
    m = functools.partial(multiply, sig=sig)
    xyx = m(m(x, y), x)
    r1 = m(xyx, z) - m(x, m(y, m(x, z)))
    r2 = m(z, xyx) - m(m(m(z, x), y), x)
    r3 = m(m(x, y), m(z, x)) - m(m(x, m(y, z)), x)
    return r1, r2, r3


def embed(v) -> np.ndarray:
    """Seven coordinates on e1..e7 -> purely imaginary algebra element."""
    v = _as_array(v)
    if v.shape[-1] != 7:
        raise DomainError("vectors of V need 7 coordinates")
    pad = np.zeros(v.shape[:-1] + (1,), dtype=v.dtype)
    if v.dtype == object:
        pad = np.empty(v.shape[:-1] + (1,), dtype=object)
        pad.fill(0)
    return np.concatenate([pad, v], axis=-1)


def imaginary_product(u, v, sig) -> np.ndarray:
    """Product of two vectors of V inside O(V), as 8 coordinates."""
    return multiply(embed(u), embed(v), sig)


def associative_form(x, y, z, sig) -> np.ndarray:
    """``phi(x, y, z) = <x, yz>`` on V."""
    return inner(embed(x), imaginary_product(y, z, sig), sig)


def coassociative_form(x, y, z, w, sig) -> np.ndarray:
    """``psi(x, y, z, w) = <x, y(zw) - w(zy)>`` on V."""
    ex, ey, ez, ew = embed(x), embed(y), embed(z), embed(w)
    m = functools.partial(multiply, sig=sig)
    return inner(ex, m(ey, m(ez, ew)) - m(ew, m(ez, ey)), sig)


def associative_tensor(sig) -> np.ndarray:
    """The 7x7x7 array ``phi(e_i, e_j, e_k)``."""
    eye = np.eye(7)
    return associative_form(eye[:, None, None, :], eye[None, :, None, :], eye[None, None, :, :], sig)


class AlgebraElement:
    """An element of O or split O; thin wrapper over the array routines."""

    __slots__ = ("coords", "sig")

    def __init__(self, coords, sig):
        coords = np.array(coords, dtype=object if _has_fractions(coords) else float)
        if coords.shape != (8,):
            raise DomainError("an algebra element has 8 coordinates")
        coords.setflags(write=False)
        self.coords = coords
        self.sig = Signature.parse(sig)

    @classmethod
    def basis(cls, k: int, sig) -> "AlgebraElement":
        c = [0] * 8
        c[k] = 1
        return cls([Fraction(v) for v in c], sig)

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.sig is not self.sig:
            raise DomainError(f"cannot combine elements of {self.sig.algebra_name} and {other.sig.algebra_name}")

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return AlgebraElement(self.coords * other, self.sig)
        self._check(other)
        return AlgebraElement(multiply(self.coords, other.coords, self.sig), self.sig)

    def __rmul__(self, scalar):
        return AlgebraElement(self.coords * scalar, self.sig)

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.coords + other.coords, self.sig)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.coords - other.coords, self.sig)

    def __neg__(self):
        return AlgebraElement(-self.coords, self.sig)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.sig is other.sig and bool(np.all(self.coords == other.coords))

    def __hash__(self):
        return hash((self.sig, tuple(self.coords)))

    def __repr__(self):
        return f"AlgebraElement({list(self.coords)!r}, {self.sig.algebra_name!r})"

    def conjugate(self) -> "AlgebraElement":
        return AlgebraElement(conjugate(self.coords), self.sig)

    def norm(self):
        return np.asarray(norm(self.coords, self.sig))[()]

    def inner(self, other: "AlgebraElement"):
        self._check(other)
        return np.asarray(inner(self.coords, other.coords, self.sig))[()]

    @property
    def real(self):
        return self.coords[0]

    @property
    def imag(self) -> np.ndarray:
        return self.coords[1:]


def _has_fractions(coords) -> bool:
    return any(isinstance(c, Fraction) for c in np.ravel(np.asarray(coords, dtype=object)))


# --- G2(V) -----------------------------------------------------------------

# Linear relations cutting g2(V) out of so(V), in matrix entries a_ij = X[i-1, j-1].
# The coefficient in the last slot of rows 3-6 is -1 for both signatures; with
# this table that is what the derivation condition X(uv) = (Xu)v + u(Xv) gives.
_G2_RELATIONS = (
    ((1, 2, 1), (4, 7, 1), (5, 6, -1)),
    ((1, 3, 1), (4, 6, -1), (5, 7, -1)),
    ((1, 4, 1), (2, 7, -1), (3, 6, 1)),
    ((1, 5, 1), (2, 6, 1), (3, 7, 1)),
    ((1, 6, 1), (2, 5, -1), (3, 4, -1)),
    ((1, 7, 1), (2, 4, 1), (3, 5, -1)),
    ((2, 3, 1), (4, 5, 1), (6, 7, -1)),
)


def g2_relation_matrix() -> np.ndarray:
    """7x49 matrix R with ``R @ X.ravel() = 0`` iff X (in so(V)) lies in g2(V)."""
    R = np.zeros((7, 49))
    for r, terms in enumerate(_G2_RELATIONS):
        for i, j, c in terms:
            R[r, (i - 1) * 7 + (j - 1)] += c
    return R


def g2_residual(X) -> float:
    X = np.asarray(X, dtype=float)
    return float(np.max(np.abs(g2_relation_matrix() @ X.ravel())))


def is_g2_algebra_element(X, sig, tol: float = 1e-9) -> bool:
    from .lie import is_skew_adjoint

    X = np.asarray(X, dtype=float)
    scale = max(1.0, float(np.max(np.abs(X))))
    return is_skew_adjoint(X, sig, tol * scale) and g2_residual(X) <= tol * scale


@functools.lru_cache(maxsize=None)
def _g2_basis(sig: Signature) -> tuple[np.ndarray, ...]:
    from .lie import algebra_basis

    basis = algebra_basis(sig)
    R = g2_relation_matrix() @ np.array([b.ravel() for b in basis]).T
    _, s, vt = np.linalg.svd(R)
    rank = int(np.sum(s > 1e-12 * s[0]))
    coeffs = vt[rank:]
    out = []
    for c in coeffs:
        X = np.tensordot(c, basis, axes=1)
        X.setflags(write=False)
        out.append(X)
    return tuple(out)


def g2_algebra_basis(sig) -> list[np.ndarray]:
    """Basis (orthonormal in coefficient space) of the solution space."""
    return list(_g2_basis(Signature.parse(sig)))


class G2Check(NamedTuple):
    is_member: bool
    residuals: dict

    def __bool__(self) -> bool:
        return self.is_member


def is_g2_group_element(A, sig, tol: float = 1e-9) -> G2Check:
    """Column test for membership of a 7x7 matrix in G2(V).

    Columns ``a1..a7`` must satisfy ``a4 a5 = eps a1``, ``a4 a6 = eps a2``,
    ``a4 a7 = eps a3``, ``a4 a5 + a6 a7 = 0`` with ``(a4, a5, a6, a7)``
    orthogonal of norms ``eps`` in the scalar product of V.
    """
    sig = Signature.parse(sig)
    A = np.asarray(A, dtype=float)
    if A.shape != (7, 7):
        raise DomainError("expected a 7x7 matrix")
    eps = sig.epsilon
    a = [None] + [A[:, i] for i in range(7)]
    ea = [None] + [embed(A[:, i]) for i in range(7)]
    p = lambda i, j: multiply(ea[i], ea[j], sig)  # noqa: E731
    res = {
        "a4a5-eps*a1": float(np.max(np.abs(p(4, 5) - eps * ea[1]))),
        "a4a6-eps*a2": float(np.max(np.abs(p(4, 6) - eps * ea[2]))),
        "a4a7-eps*a3": float(np.max(np.abs(p(4, 7) - eps * ea[3]))),
        "a4a5+a6a7": float(np.max(np.abs(p(4, 5) + p(6, 7)))),
    }
    frame = np.stack([a[4], a[5], a[6], a[7]], axis=1)
    gram = frame.T @ sig.eta @ frame
    res["frame"] = float(np.max(np.abs(gram - eps * np.eye(4))))
    ok = all(v <= tol for v in res.values()) and abs(np.linalg.det(A)) > tol
    return G2Check(bool(ok), res)
