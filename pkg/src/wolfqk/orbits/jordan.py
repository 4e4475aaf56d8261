"""Jordan-Chevalley splitting ``A = S + N`` for real 7x7 matrices.

Eigenvalues are grouped by single linkage.  Among the cuts of the linkage
tree, the finest one is taken whose clusters are closed under ``z -> -z``
and conjugation, whose spectral projectors stay bounded and for which the
Newton iteration ``S <- S - p(S) p'(S)^{-1}`` (p the square-free polynomial
with the cluster centres as roots) converges to a semisimple S with
nilpotent ``A - S``.  Splitting a defective eigenvalue into spurious
clusters shows up as an exploding projector, merging distinct eigenvalues
as a non-nilpotent remainder, or, when the merged eigenvalues were only
slightly apart, as a nilpotent part whose powers vanish too slowly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.cluster.hierarchy
import sympy

from ..signature import DomainError

DEFAULT_TOL = 1e-8
PROJECTOR_BOUND = 1e5
NEWTON_STEPS = 30
# ``|N^(K+1)|`` of a genuine height-K nilpotent part is rounding noise of size
# ``eps |N|^K``; merged semisimple eigenvalues leave a far larger remainder
NILPOTENT_RESIDUAL_BOUND = 1e5


class IllConditionedError(ArithmeticError):
    """Eigenvalue clusters are too close to separate reliably."""

    def __init__(self, message: str, gap: float):
        super().__init__(message)
        self.gap = gap


@dataclass(frozen=True)
class Cluster:
    center: complex
    multiplicity: int
    radius: float
    exact: object = None


@dataclass(frozen=True)
class SemisimpleNilpotentPair:
    S: np.ndarray
    N: np.ndarray
    height: int
    clusters: tuple[Cluster, ...]
    scale: float
    gap: float


def _symmetric_centers(groups: list[np.ndarray], tol: float) -> list[Cluster] | None:
    """Cluster centres with the spectral symmetry of a real skew-adjoint matrix imposed."""
    raw = [(complex(np.mean(g)), len(g), float(np.max(np.abs(g - np.mean(g))))) for g in groups]
    out: list[Cluster] = []
    used = [False] * len(raw)
    for i, (c, m, r) in enumerate(raw):
        if used[i]:
            continue
        slack = 10 * max(r, tol)
        partners = {}
        for name, target in (("neg", -c), ("conj", c.conjugate()), ("negconj", -c.conjugate())):
            j = min(range(len(raw)), key=lambda j: abs(raw[j][0] - target))
            if abs(raw[j][0] - target) > slack + raw[j][2] or raw[j][1] != m:
                return None
            partners[name] = j
        orbit = {i, *partners.values()}
        if any(used[j] for j in orbit):
            return None
        for j in orbit:
            used[j] = True
        a = np.mean([abs(raw[j][0].real) for j in orbit])
        b = np.mean([abs(raw[j][0].imag) for j in orbit])
        if abs(c.real) <= slack:
            a = 0.0
        if abs(c.imag) <= slack:
            b = 0.0
        radius = max(raw[j][2] for j in orbit)
        for z in {complex(a, b), complex(-a, -b), complex(a, -b), complex(-a, b)}:
            out.append(Cluster(z, m, radius))
    if len(out) != len(raw):
        return None
    return out


def _poly_from_roots(roots: list[complex]) -> np.ndarray:
    coeffs = np.poly(roots)
    if np.max(np.abs(np.imag(coeffs))) <= 1e-12 * max(1.0, float(np.max(np.abs(coeffs)))):
        return np.real(coeffs)
    return coeffs


def _polyval_matrix(coeffs: np.ndarray, X: np.ndarray) -> np.ndarray:
    out = np.zeros_like(X)
    eye = np.eye(X.shape[0])
    for c in coeffs:
        out = out @ X + c * eye
    return out


def _newton(A: np.ndarray, centers: list[complex]) -> np.ndarray | None:
    p = _poly_from_roots(centers)
    dp = np.polyder(p)
    S = A.copy()
    prev = np.inf
    for _ in range(NEWTON_STEPS):
        P = _polyval_matrix(p, S)
        res = float(np.max(np.abs(P)))
        if res <= 1e-13:
            break
        try:
            step = np.linalg.solve(_polyval_matrix(dp, S), P)
        except np.linalg.LinAlgError:
            return None
        S = S - step
        if not np.all(np.isfinite(S)):
            return None
        if res >= prev and res < 1e-9:
            break
        prev = res
    return S


def _projector_norm(S: np.ndarray, clusters: list[Cluster]) -> float:
    if len(clusters) == 1:
        return 1.0
    eye = np.eye(S.shape[0])
    worst = 0.0
    for c in clusters:
        P = eye.astype(complex)
        for d in clusters:
            if d is not c:
                P = P @ (S - d.center * eye) / (c.center - d.center)
        worst = max(worst, float(np.linalg.norm(P, 2)))
    return worst


def _validate(A: np.ndarray, clusters: list[Cluster], tol: float):
    S = _newton(A, [c.center for c in clusters])
    if S is None:
        return None
    S = S.real
    N = A - S
    if np.max(np.abs(_polyval_matrix(_poly_from_roots([c.center for c in clusters]), S))) > 1e-8:
        return None
    if np.max(np.abs(S @ N - N @ S)) > 1e-8:
        return None
    mmax = max(c.multiplicity for c in clusters)
    if np.max(np.abs(np.linalg.matrix_power(N, mmax))) > 1e-8:
        return None
    if _projector_norm(S, clusters) > PROJECTOR_BOUND:
        return None
    return S, N


def height_tolerance(tol: float) -> float:
    """Size (relative to |A|) below which a nilpotent part counts as zero."""
    return max(1e-9, 10 * tol)


def nilpotent_height(N: np.ndarray, tol: float = 1e-9) -> int:
    """Largest k with ``N^k != 0`` (N normalised to unit scale)."""
    k = 0
    M = np.eye(N.shape[0])
    while k < N.shape[0]:
        M = M @ N
        if np.max(np.abs(M)) <= tol * max(1.0, np.max(np.abs(N))) ** (k + 1):
            break
        k += 1
    return k


def _candidate_cuts(lam: np.ndarray, tol: float) -> list[list[np.ndarray]]:
    n = len(lam)
    pts = np.column_stack([lam.real, lam.imag])
    if n == 1:
        return [[lam]]
    Z = scipy.cluster.hierarchy.linkage(pts, method="single")
    heights = Z[:, 2]
    cuts = [tol] + [h * (1 + 1e-9) for h in heights if h > tol]
    out, seen = [], set()
    for t in cuts:
        labels = scipy.cluster.hierarchy.fcluster(Z, t=t, criterion="distance")
        key = tuple(labels)
        if key in seen:
            continue
        seen.add(key)
        out.append([lam[labels == c] for c in np.unique(labels)])
    return out


def _gap(clusters: list[Cluster]) -> float:
    centers = [c.center for c in clusters]
    if len(centers) < 2:
        return float("inf")
    return min(abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1 :])


def jordan_chevalley(A, tol: float = DEFAULT_TOL) -> SemisimpleNilpotentPair:
    """Split A into commuting semisimple and nilpotent polynomials in A.

    ``tol`` is the relative radius below which eigenvalues always count as
    equal.  Raises :class:`IllConditionedError` when the accepted clusters
    lie within ten times their own radius (or ``10 tol``) of each other.
    """
    if _is_exact_input(A):
        return jordan_chevalley_exact(A, tol)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("expected a square matrix")
    scale = float(np.linalg.norm(A))
    n = A.shape[0]
    if scale == 0.0:
        return SemisimpleNilpotentPair(np.zeros_like(A), np.zeros_like(A), 0, (Cluster(0j, n, 0.0),), 0.0, float("inf"))
    An = A / scale
    lam = np.linalg.eigvals(An)
    for groups in _candidate_cuts(lam, tol):
        clusters = _symmetric_centers(groups, tol)
        if clusters is None:
            continue
        got = _validate(An, clusters, tol)
        if got is None:
            continue
        return _finish(got, clusters, scale, tol)
    raise IllConditionedError("no consistent eigenvalue clustering", 0.0)


def _finish(got, clusters, scale, tol, exact=None):
    S, N = got
    gap = _gap(clusters)
    radius = max(c.radius for c in clusters)
    if gap < 10 * max(radius, tol):
        raise IllConditionedError(
            f"eigenvalue clusters separated by {gap * scale:.3e} with spread {radius * scale:.3e}", gap * scale
        )
    k = nilpotent_height(N, height_tolerance(tol))
    if k > 0 and exact is None:
        size = float(np.max(np.abs(N)))
        residual = float(np.max(np.abs(np.linalg.matrix_power(N, k + 1))))
        if residual > NILPOTENT_RESIDUAL_BOUND * np.finfo(float).eps * size**k:
            raise IllConditionedError(
                f"nilpotent part of size {size * scale:.3e} is not separated from the eigenvalue spread",
                gap * scale,
            )
    scaled = tuple(
        Cluster(c.center * scale, c.multiplicity, c.radius * scale, None if exact is None else exact.get(c.center))
        for c in clusters
    )
    return SemisimpleNilpotentPair(S * scale, N * scale, k, scaled, scale, gap * scale)


# --- exact input -----------------------------------------------------------------


def _is_exact_input(A) -> bool:
    if isinstance(A, sympy.MatrixBase):
        return True
    arr = np.asarray(A, dtype=object)
    return arr.dtype == object and any(not isinstance(x, (float, np.floating)) for x in arr.flat)


def exact_spectrum(A) -> list[tuple[object, int]]:
    """Exact eigenvalues with multiplicities of a rational or symbolic matrix."""
    M = sympy.Matrix(A).applyfunc(sympy.nsimplify)
    lam = sympy.Symbol("lam")
    roots = sympy.roots(M.charpoly(lam).as_expr(), lam)
    if sum(roots.values()) != M.shape[0]:
        raise IllConditionedError("characteristic polynomial does not split in radicals", 0.0)
    return [(sympy.nsimplify(r), m) for r, m in roots.items()]


def jordan_chevalley_exact(A, tol: float = DEFAULT_TOL) -> SemisimpleNilpotentPair:
    """As :func:`jordan_chevalley`, with clusters fixed by the exact spectrum."""
    spec = exact_spectrum(A)
    Af = np.array(sympy.Matrix(A).evalf(), dtype=float)
    scale = float(np.linalg.norm(Af))
    n = Af.shape[0]
    if scale == 0.0:
        return SemisimpleNilpotentPair(
            np.zeros_like(Af), np.zeros_like(Af), 0, (Cluster(0j, n, 0.0, sympy.Integer(0)),), 0.0, float("inf")
        )
    clusters = [Cluster(complex(sympy.N(r)) / scale, m, 0.0) for r, m in spec]
    exact = {c.center: r for c, (r, _) in zip(clusters, spec)}
    got = _validate(Af / scale, clusters, tol)
    if got is None:
        raise IllConditionedError("Newton iteration failed on the exact spectrum", 0.0)
    return _finish(got, clusters, scale, tol, exact)
