"""Moment map of a one-parameter action on SO(V) and what is built from it.

For a generator ``v`` of the acting line and ``g`` in the group the moment
map is ``mu_v(g) = (Ad_g^{-1} v)_s``, read in R^3 through
:func:`wolfqk.lie.sp1_coordinates`.  The scale constant ``lam`` of the
quaternionic two-form and of the second fundamental form defaults to 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import lie
from .algebra import g2_algebra_basis
from .signature import DomainError, Signature

DEFAULT_TOL = 1e-9


class DegenerateDenominatorError(ArithmeticError):
    """The m-component of ``Ad_g^{-1} v`` vanishes: g is an irregular point."""

    def __init__(self, m_norm: float):
        super().__init__(f"|(Ad_g^-1 v)_m| = {m_norm:.3e}: irregular point")
        self.m_norm = m_norm


class Regularity(enum.Enum):
    REGULAR = "regular"
    IRREGULAR_3SASAKIAN = "irregular-3sasakian"
    IRREGULAR_TWISTOR = "irregular-twistor"
    IRREGULAR_QUATERNIONIC = "irregular-quaternionic"


def _pulled_back(v, g, sig) -> np.ndarray:
    return lie.Ad_inv(g, np.asarray(v, dtype=float), sig)


def moment(v, g, sig) -> np.ndarray:
    return lie.sp1_coordinates(_pulled_back(v, g, sig), sig)


def moment_explicit(omega, g) -> np.ndarray:
    """Moment map of ``F^{-1}(omega)`` from the last four columns of g."""
    return lie.explicit_moment_components(omega, g)


def moment_differential(v, g, w, sig) -> np.ndarray:
    """``d_g mu_v`` applied to the left-invariant direction w: ``[Ad_g^{-1} v, w]_s``."""
    B = _pulled_back(v, g, sig)
    return lie.sp1_coordinates(lie.bracket(B, np.asarray(w, dtype=float)), sig)


def differential_matrix(v, g, sig) -> np.ndarray:
    """3x21 matrix of ``w -> d_g mu_v(w)`` on :func:`wolfqk.lie.algebra_basis`."""
    B = _pulled_back(v, g, sig)
    return np.stack(
        [lie.sp1_coordinates(lie.bracket(B, E), sig) for E in lie.algebra_basis(sig)], axis=1
    )


def classify_regularity(v, g, sig, tol: float = DEFAULT_TOL, direction=(1.0, 0.0, 0.0)) -> Regularity:
    """Strongest of the three isotropy conditions met by ``Ad_g^{-1} v``.

    ``direction`` is the unit vector of s fixing the circle ``u``.
    """
    B = _pulled_back(v, g, sig)
    scale = max(1.0, float(np.max(np.abs(B))))
    if float(np.max(np.abs(lie.project_m(B)))) > tol * scale:
        return Regularity.REGULAR
    mu = lie.sp1_coordinates(B, sig)
    if float(np.max(np.abs(mu))) <= tol * scale:
        return Regularity.IRREGULAR_3SASAKIAN
    i = np.asarray(direction, dtype=float)
    i = i / np.linalg.norm(i)
    if float(np.max(np.abs(mu - np.dot(mu, i) * i))) <= tol * scale:
        return Regularity.IRREGULAR_TWISTOR
    return Regularity.IRREGULAR_QUATERNIONIC


def _checked_m_norm(B, tol: float) -> float:
    n = lie.m_norm(B)
    if n <= tol * max(1.0, float(np.max(np.abs(B)))):
        raise DegenerateDenominatorError(n)
    return n


def second_fundamental_form(v, g, w1, w2, sig, lam: float = 1.0, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``lam / |B_m| * [[w1, B], w2]_s`` with ``B = Ad_g^{-1} v``."""
    B = _pulled_back(v, g, sig)
    n = _checked_m_norm(B, tol)
    inner = lie.bracket(lie.bracket(np.asarray(w1, dtype=float), B), np.asarray(w2, dtype=float))
    return (lam / n) * lie.sp1_coordinates(inner, sig)


def _s_inner(a, b) -> float:
    # <s, s'> = -tr(s s')/2 in R^3 coordinates
    return 0.5 * float(np.dot(a, b))


def sectional_curvature(v, g, w1, w2, sig, lam: float = 1.0, tol: float = DEFAULT_TOL) -> float:
    """``|[w1, w2]|^2 + <a(w1,w1), a(w2,w2)> - |a(w1,w2)|^2``.

    Squared norms are taken with ``<A, B> = -tr(AB)/2``.
    """
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    c = lie.bracket(w1, w2)
    a11 = second_fundamental_form(v, g, w1, w1, sig, lam, tol)
    a22 = second_fundamental_form(v, g, w2, w2, sig, lam, tol)
    a12 = second_fundamental_form(v, g, w1, w2, sig, lam, tol)
    return lie.killing(c, c) + _s_inner(a11, a22) - _s_inner(a12, a12)


def quaternionic_two_form(v, w, sig, lam: float = 1.0) -> np.ndarray:
    """``Theta(v, w) = -lam [v, w]_s``."""
    return -lam * lie.sp1_coordinates(lie.bracket(np.asarray(v, float), np.asarray(w, float)), sig)


def energy(v, g, sig) -> float:
    """``E(g) = <mu, mu>`` on s; equals ``|moment(v, g)|^2 / 2``."""
    mu = moment(v, g, sig)
    return _s_inner(mu, mu)


def energy_gradient(v, g, sig) -> np.ndarray:
    """Gradient of :func:`energy` as a left-invariant direction.

    Taken with respect to :func:`wolfqk.lie.riemannian_inner`, so that
    ``dE(w) = riemannian_inner(grad, w)`` for ``t -> g exp(t w)``.
    """
    sig = Signature.parse(sig)
    B = _pulled_back(v, g, sig)
    Bs = lie.project_s(B, sig)
    Bm = lie.project_m(B)
    e = sig.eta
    return 2.0 * e @ lie.bracket(Bs, Bm) @ e


def tangent_vectors(v, g, sig, rng: np.random.Generator, count: int = 2, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal directions in m tangent to the zero locus at a regular g.

    Random m directions are projected onto ``ker d_g mu_v`` by least squares
    and orthonormalised in the Riemannian metric.
    """
    sig = Signature.parse(sig)
    B = _pulled_back(v, g, sig)
    _checked_m_norm(B, tol)
    m_basis = [E for E in lie.algebra_basis(sig) if np.any(lie.project_m(E))]
    L = np.stack([lie.sp1_coordinates(lie.bracket(B, E), sig) for E in m_basis], axis=1)
    out: list[np.ndarray] = []
    for _ in range(50 * count):
        if len(out) == count:
            break
        c = rng.normal(size=len(m_basis))
        c = c - np.linalg.lstsq(L, L @ c, rcond=None)[0]
        w = np.tensordot(c, np.array(m_basis), axes=1)
        for u in out:
            w = w - lie.riemannian_inner(u, w) * u
        n = np.sqrt(lie.riemannian_inner(w, w))
        if n > 1e-8:
            out.append(w / n)
    return out


# --- flow --------------------------------------------------------------------


@dataclass(frozen=True)
class FlowState:
    g: np.ndarray
    t: float
    energy: float

    def to_json(self) -> dict:
        return {"t": self.t, "energy": self.energy, "g": self.g.tolist()}


@dataclass
class FlowResult:
    """Trajectory and outcome of :func:`flow`.

    ``status`` is ``"converged"`` (E <= tol), ``"critical"`` (gradient
    vanished with E > tol), ``"stalled"`` (no step size lowers E) or
    ``"max_steps"``.
    """

    trajectory: list[FlowState]
    status: str
    steps: int
    grad_norm: float
    regularity: Regularity | None = None
    halvings: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def final(self) -> FlowState:
        return self.trajectory[-1]

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "steps": self.steps,
            "grad_norm": self.grad_norm,
            "regularity": None if self.regularity is None else self.regularity.value,
            "halvings": self.halvings,
            "diagnostics": self.diagnostics,
            "trajectory": [s.to_json() for s in self.trajectory],
        }


def flow(
    v,
    g0,
    sig,
    step: float = 0.5,
    max_steps: int = 5000,
    tol: float = 1e-8,
    grad_tol: float | None = None,
    record_every: int = 1,
) -> FlowResult:
    """Descend E along ``g <- g exp(-step * grad E)``.

    The step is halved whenever a trial step would raise the energy, so
    accepted steps never increase E.  Non-convergence is reported through
    ``status``, never raised.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    sig = Signature.parse(sig)
    v = np.asarray(v, dtype=float)
    g = np.asarray(g0, dtype=float).copy()
    grad_tol = tol if grad_tol is None else grad_tol
    E = energy(v, g, sig)
    t = 0.0
    states = [FlowState(g.copy(), t, E)]
    halvings = 0
    status = "max_steps"
    grad_norm = float("nan")
    steps = 0
    h = step
    while True:
        grad = energy_gradient(v, g, sig)
        grad_norm = float(np.sqrt(lie.riemannian_inner(grad, grad)))
        if E <= tol:
            status = "converged"
            break
        if grad_norm <= grad_tol:
            status = "critical"
            break
        if steps >= max_steps:
            break
        while True:
            trial = g @ lie.exp(-h * grad)
            E_trial = energy(v, trial, sig)
            if E_trial <= E:
                break
            h *= 0.5
            halvings += 1
            if h < 1e-300:
                status = "stalled"
                break
        if status == "stalled":
            break
        g, E = trial, E_trial
        t += h
        steps += 1
        if steps % record_every == 0:
            states.append(FlowState(g.copy(), t, E))
    if states[-1].t != t or len(states) == 1 and steps:
        states.append(FlowState(g.copy(), t, E))
    regularity = classify_regularity(v, g, sig) if status == "critical" else None
    return FlowResult(
        states,
        status,
        steps,
        grad_norm,
        regularity,
        halvings,
        {"final_energy": E, "final_step": h},
    )


# --- zero loci ---------------------------------------------------------------


@dataclass(frozen=True)
class ZeroLocusPoint:
    g: np.ndarray
    v: np.ndarray
    sig: Signature
    regularity: Regularity
    residual: float

    def to_json(self) -> dict:
        return {
            "sig": self.sig.value,
            "g": self.g.tolist(),
            "regularity": self.regularity.value,
            "residual": self.residual,
        }


def make_zero_locus_point(v, g, sig, tol: float = DEFAULT_TOL) -> ZeroLocusPoint:
    sig = Signature.parse(sig)
    residual = float(np.max(np.abs(moment(v, g, sig))))
    scale = max(1.0, float(np.max(np.abs(v))))
    if residual > tol * scale:
        raise DomainError(f"g is not in the zero locus (residual {residual:.3e})")
    return ZeroLocusPoint(np.asarray(g, float), np.asarray(v, float), sig, classify_regularity(v, g, sig, tol), residual)


def _embedded_so3(rng: np.random.Generator) -> np.ndarray:
    X = np.zeros((7, 7))
    a = rng.normal(size=3)
    X[0, 1], X[0, 2], X[1, 2] = a
    X[1, 0], X[2, 0], X[2, 1] = -a
    return lie.exp(X)


def random_g2_element(sig, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    basis = g2_algebra_basis(sig)
    X = np.tensordot(rng.normal(size=len(basis)), np.array(basis), axes=1)
    return lie.exp(X * (scale / np.linalg.norm(X)))


def sample_zero_locus_canonical(
    x,
    n: int,
    sig,
    rng: np.random.Generator | int | None = None,
    tol: float = DEFAULT_TOL,
    flow_time: float = 1.0,
) -> list[ZeroLocusPoint]:
    """Points ``exp(s A_x) gamma r`` with gamma in G2(V) and r in SO(3).

    ``s`` is uniform in ``[-flow_time, flow_time]``; each point is checked to
    lie in the zero locus of ``A_x``.
    """
    sig = Signature.parse(sig)
    if n <= 0:
        raise DomainError("n must be positive")
    x = np.asarray(x, dtype=float)
    q = float(x @ sig.eta @ x)
    if not (abs(q) < 1e-12 or abs(abs(q) - 1.0) < 1e-9):
        raise DomainError(f"x must satisfy |x|_V in {{1, -1, 0}}, got {q}")
    if not np.any(x):
        raise DomainError("x must be nonzero")
    rng = np.random.default_rng(rng)
    A = lie.canonical_vector_field(x, sig)
    out = []
    for _ in range(n):
        s = rng.uniform(-flow_time, flow_time)
        g = lie.exp(A, s) @ random_g2_element(sig, rng) @ _embedded_so3(rng)
        out.append(make_zero_locus_point(A, g, sig, tol))
    return out


def in_zero_locus(v, g, sig, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(v))))
    return float(np.max(np.abs(moment(v, g, sig)))) <= tol * scale


def extra_symmetry_check(v, g, h, sig, tol: float = DEFAULT_TOL) -> bool:
    """True when ``h in Z(v)`` and ``g h in Z(Ad_g v)`` agree."""
    sig = Signature.parse(sig)
    first = in_zero_locus(v, h, sig, tol)
    second = in_zero_locus(lie.Ad(g, v, sig), np.asarray(g) @ np.asarray(h), sig, tol)
    return first == second
