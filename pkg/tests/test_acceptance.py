"""Acceptance criteria 1-9.

Each criterion is a function returning ``(passed, detail)``.  The pytest
wrappers record one PASS/FAIL line per criterion (printed in the terminal
summary by ``conftest.py``); ``python3 tests/test_acceptance.py`` prints the
same lines directly.
"""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from wolfqk import algebra, lie
from wolfqk import moment as M
from wolfqk.io import load_canonical_fixtures
from wolfqk.orbits import (
    FAMILIES,
    FamilyLabel,
    Verdict,
    canonical_representative,
    classify,
    family_label,
    is_proper_free,
    parse_type_sum,
)
from wolfqk.orbits.families import parameter_count
from wolfqk.signature import COMPACT, SPLIT

RESULTS: dict[int, tuple[bool, str]] = {}

N_ALGEBRA = 10_000
FLOAT_REL = 1e-12


def _record(number: int, passed: bool, detail: str) -> None:
    RESULTS[number] = (passed, detail)


def report_line(number: int) -> str:
    passed, detail = RESULTS[number]
    return f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"


# --- 1. algebra identities ------------------------------------------------------


def _identity_residuals(x, y, z, sig):
    m = lambda a, b: algebra.multiply(a, b, sig)  # noqa: E731
    r1, r2, r3 = algebra.moufang_residuals(x, y, z, sig)
    left_alt = m(m(x, x), y) - m(x, m(x, y))
    right_alt = m(y, m(x, x)) - m(m(y, x), x)
    normmult = algebra.norm(m(x, y), sig) - algebra.norm(x, sig) * algebra.norm(y, sig)
    return (r1, r2, r3, left_alt, right_alt), normmult


def criterion_1(seed: int = 1):
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst_rel = 0.0
    exact_ok = True
    for sig in (COMPACT, SPLIT):
        # rational mode: integer numerators over a common denominator are exact
        # in int64 since every identity is homogeneous
        x, y, z = (rng.integers(-9, 10, size=(N_ALGEBRA, 8)) for _ in range(3))
        vecs, nm = _identity_residuals(x, y, z, sig)
        exact_ok &= all(not np.any(r) for r in vecs) and not np.any(nm)
        # and a batch of genuine Fractions
        fr = lambda: np.array(  # noqa: E731
            [[Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 8), rng.integers(1, 8, 8))] for _ in range(200)],
            dtype=object,
        )
        vecs, nm = _identity_residuals(fr(), fr(), fr(), sig)
        exact_ok &= all(all(v == 0 for v in r.ravel()) for r in vecs) and all(v == 0 for v in nm.ravel())
        # float mode, residuals relative to the Euclidean sizes of the inputs
        x, y, z = (rng.normal(size=(N_ALGEBRA, 8)) for _ in range(3))
        nx, ny, nz = (np.linalg.norm(a, axis=1) for a in (x, y, z))
        vecs, nm = _identity_residuals(x, y, z, sig)
        scales = [nx**2 * ny * nz] * 3 + [nx**2 * ny] * 2
        for r, s in zip(vecs, scales):
            worst_rel = max(worst_rel, float(np.max(np.linalg.norm(r, axis=1) / s)))
        worst_rel = max(worst_rel, float(np.max(np.abs(nm) / (nx**2 * ny**2))))
    elapsed = time.perf_counter() - start
    passed = exact_ok and worst_rel <= FLOAT_REL and elapsed < 10.0
    return passed, f"exact={exact_ok} float_rel={worst_rel:.2e} (<= {FLOAT_REL:g}) time={elapsed:.2f}s (< 10s)"


# --- 2. g2 dimension and closure ------------------------------------------------


def criterion_2():
    dims = {}
    worst = 0.0
    for sig in (COMPACT, SPLIT):
        basis = algebra.g2_algebra_basis(sig)
        R = algebra.g2_relation_matrix()
        so = np.array([b.ravel() for b in lie.algebra_basis(sig)])
        dims[sig.value] = 21 - int(np.linalg.matrix_rank(R @ so.T, tol=1e-10))
        for X in basis:
            for Y in basis:
                Z = lie.bracket(X, Y)
                worst = max(worst, algebra.g2_residual(Z), float(np.max(np.abs(Z.T @ sig.eta + sig.eta @ Z))))
        dims[sig.value + " basis"] = len(basis)
    passed = all(d == 14 for d in dims.values()) and worst <= 1e-12
    return passed, f"dims={dims} closure_residual={worst:.2e} (<= 1e-12)"


# --- 3. two paths to the moment map -----------------------------------------------


def criterion_3(seed: int = 3, n: int = 1000):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for sig in (COMPACT, SPLIT):
        for _ in range(n):
            W = rng.normal(size=(7, 7))
            W = W - W.T
            g = lie.random_group_element(sig, rng, rng.uniform(0.1, 2.0))
            a = M.moment(lie.two_form_to_matrix(W, sig), g, sig)
            b = M.moment_explicit(W, g)
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-10, f"max |moment - moment_explicit| = {worst:.2e} (<= 1e-10), {n} samples per signature"


# --- 4. zero locus ------------------------------------------------------------------


def criterion_4(seed: int = 4, n: int = 1000):
    x = np.zeros(7)
    x[0] = 1.0  # |x| = 1 in both signatures
    worst = {}
    for sig in (COMPACT, SPLIT):
        pts = M.sample_zero_locus_canonical(x, n, sig, np.random.default_rng(seed))
        worst[sig.value] = max(p.residual for p in pts)
    passed = all(w <= 1e-9 for w in worst.values())
    return passed, "max residual " + ", ".join(f"{k}: {v:.2e}" for k, v in worst.items()) + f" (<= 1e-9), n={n}"


# --- 5. types of A_x --------------------------------------------------------------

PUBLISHED_AX_TYPES = {
    "timelike": (0, r"\Delta_0^{+}(i,-i)\oplus 2\Delta_0^{-}(-i,i)\oplus\Delta_0^{+}(0)"),
    "spacelike": (3, r"3\Delta_0(1,-1)\oplus\Delta_0^{-}(0)"),
    "lightlike": (None, r"\Delta_1(0,0)\oplus\Delta_2^+(0)"),
}


def _ax_vector(index):
    x = np.zeros(7)
    if index is None:
        x[0] = x[3] = 1.0
    else:
        x[index] = 1.0
    return x


def criterion_5():
    lines = []
    passed = True
    for case, (index, text) in PUBLISHED_AX_TYPES.items():
        A = lie.canonical_vector_field(_ax_vector(index), SPLIT)
        expected = parse_type_sum(text)
        got = classify(A, SPLIT)
        exact = classify(sympy.Matrix(np.rint(A).astype(int)), SPLIT)
        ok = str(got) == str(expected) and exact == parse_type_sum(text, exact=True)
        passed &= ok
        lines.append(f"{case}: {got}")
    return passed, "; ".join(lines)


# --- 6. round trip ----------------------------------------------------------------


def draw_params(name: str, rng: np.random.Generator, low=0.5, high=2.5, sep=0.2) -> tuple[float, ...]:
    n = parameter_count(name)
    while True:
        p = rng.uniform(low, high, size=n)
        if n < 2 or np.min(np.diff(np.sort(p))) >= sep:
            return tuple(float(v) for v in p)


def random_conjugator(rng: np.random.Generator, sig=SPLIT, max_norm: float = 2.0) -> np.ndarray:
    return lie.random_group_element(sig, rng, rng.uniform(0.0, max_norm))


def criterion_6(seed: int = 6, draws: int = 5, conjugations: int = 100):
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    total = bad = 0
    first_bad = ""
    for name in FAMILIES:
        for _ in range(draws):
            label = FamilyLabel(name, draw_params(name, rng))
            A = canonical_representative(label)
            for k in range(conjugations + 1):
                P = np.eye(7) if k == 0 else random_conjugator(rng)
                B = P @ A @ lie.group_inverse(P, SPLIT)
                total += 1
                try:
                    got = family_label(classify(B, SPLIT))
                    ok = got.isclose(label, 1e-6)
                except Exception as exc:  # reported as a failure, not raised
                    got, ok = repr(exc), False
                if not ok:
                    bad += 1
                    first_bad = first_bad or f" first mismatch {label} -> {got}"
    elapsed = time.perf_counter() - start
    passed = bad == 0 and elapsed < 60.0
    return passed, f"{total - bad}/{total} classifications match, time={elapsed:.1f}s (< 60s){first_bad}"


# --- 7. properness ----------------------------------------------------------------


def _exact_iv4(a, b, c) -> sympy.Matrix:
    """Block-diagonal IV_4(a, b, c): rate a on the positive block, b and c on the negative ones."""
    A = sympy.zeros(7, 7)
    for (i, j), r in zip(((1, 2), (3, 4), (5, 6)), (a, b, c)):
        A[i, j], A[j, i] = -r, r
    return A


def criterion_7():
    checks = {}
    fixtures = load_canonical_fixtures()["representatives"]
    non_iv4 = []
    for rep in fixtures:
        if rep["family"] == "IV_4":
            continue
        label = family_label(classify(rep["matrix"]["rows"], SPLIT))
        non_iv4.append(is_proper_free(label).verdict is Verdict.PROPER_FREE)
    checks["non-IV_4 proper_free"] = len(non_iv4) == 23 and all(non_iv4)

    r = is_proper_free(family_label(classify(canonical_representative(FamilyLabel("IV_4", (1, 2, 3))), SPLIT)))
    checks["IV_4(1,2,3) proper, irregular-free"] = r.verdict is Verdict.PROPER and r.irregular_free is True
    r = is_proper_free(family_label(classify(_exact_iv4(1, 2, 3), SPLIT)))
    checks["exact IV_4(1,2,3) proper"] = r.verdict is Verdict.PROPER and r.irregular_free is True and r.exact

    r = is_proper_free(family_label(classify(canonical_representative(FamilyLabel("IV_4", (1, 1, 1))), SPLIT)))
    checks["IV_4(1,1,1) proper, irregular"] = r.verdict is Verdict.PROPER and r.irregular_free is False

    label = family_label(classify(_exact_iv4(1, sympy.sqrt(2), 1), SPLIT))
    r = is_proper_free(label)
    checks["exact IV_4(1,sqrt2,1) not proper"] = r.verdict is Verdict.NOT_PROPER and r.exact
    passed = all(checks.values())
    return passed, "; ".join(f"{k}: {'ok' if v else 'WRONG'}" for k, v in checks.items())


# --- 8. calculus and flow -----------------------------------------------------------

FD_STEP = 1e-5
FD_REL = 1e-6
FD_FLOOR = 1e-3


def _fd_errors(sig, rng, n):
    worst_mu = worst_E = 0.0
    h = FD_STEP
    for _ in range(n):
        v = lie.random_algebra_element(sig, rng)
        g = lie.random_group_element(sig, rng, rng.uniform(0.1, 2.0))
        w = lie.random_algebra_element(sig, rng)
        gp, gm = g @ lie.exp(w, h), g @ lie.exp(w, -h)
        fd = (M.moment(v, gp, sig) - M.moment(v, gm, sig)) / (2 * h)
        an = M.moment_differential(v, g, w, sig)
        worst_mu = max(worst_mu, float(np.linalg.norm(fd - an) / max(np.linalg.norm(an), FD_FLOOR)))
        fdE = (M.energy(v, gp, sig) - M.energy(v, gm, sig)) / (2 * h)
        anE = lie.riemannian_inner(M.energy_gradient(v, g, sig), w)
        worst_E = max(worst_E, abs(fdE - anE) / max(abs(anE), FD_FLOOR))
    return worst_mu, worst_E


def criterion_8(seed: int = 8, n_fd: int = 1000, n_flow: int = 100):
    rng = np.random.default_rng(seed)
    fd = {sig.value: _fd_errors(sig, rng, n_fd) for sig in (COMPACT, SPLIT)}
    fd_ok = all(max(e) <= FD_REL for e in fd.values())
    converged = 0
    monotone = True
    for _ in range(n_flow):
        v = lie.random_algebra_element(COMPACT, rng)
        g0 = lie.random_group_element(COMPACT, rng, 3.0)
        res = M.flow(v, g0, COMPACT, tol=1e-8)
        E = np.array([s.energy for s in res.trajectory])
        monotone &= bool(np.all(np.diff(E) <= 0.0))
        converged += res.converged and res.final.energy <= 1e-8
    passed = fd_ok and monotone and converged >= 95
    fd_text = ", ".join(f"{k}: dmu {a:.1e} dE {b:.1e}" for k, (a, b) in fd.items())
    return passed, f"fd rel ({fd_text}) (<= {FD_REL:g}); flow monotone={monotone}, converged {converged}/{n_flow} (>= 95)"


# --- 9. critical set -----------------------------------------------------------------


def engineered_zero_locus_point(sig, rng, irregular: bool):
    """(v, g) with mu_v(g) = 0; the m-part of Ad_g^{-1} v vanishes iff ``irregular``."""
    X = lie.random_algebra_element(sig, rng)
    B = lie.project_h_prime(X, sig) if irregular else X - lie.project_s(X, sig)
    g = lie.random_group_element(sig, rng, rng.uniform(0.1, 2.0))
    return lie.Ad(g, B, sig), g


def criterion_9(seed: int = 9, n: int = 1000, tol: float = 1e-9):
    rng = np.random.default_rng(seed)
    mismatches = 0
    counts = {"irregular": 0, "regular": 0}
    for k in range(n):
        sig = COMPACT if k % 2 == 0 else SPLIT
        v, g = engineered_zero_locus_point(sig, rng, irregular=(k // 2) % 2 == 0)
        D = M.differential_matrix(v, g, sig)
        rank = int(np.linalg.matrix_rank(D, tol=tol * max(1.0, float(np.max(np.abs(v))))))
        small = lie.m_norm(lie.Ad_inv(g, v, sig)) <= tol
        counts["irregular" if small else "regular"] += 1
        mismatches += (rank < 3) != small
    return mismatches == 0, f"{mismatches} mismatches on {n} points ({counts})"


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    passed, detail = CRITERIA[number]()
    _record(number, passed, detail)
    print(report_line(number))
    assert passed, report_line(number)


if __name__ == "__main__":
    for number, fn in CRITERIA.items():
        _record(number, *fn())
        print(report_line(number), flush=True)
