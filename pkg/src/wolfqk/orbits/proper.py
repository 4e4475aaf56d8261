"""Properness and freeness of the reduction generated by one orbit."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from ..signature import DomainError
from .families import FamilyLabel

DENOMINATOR_BOUND = 10**6
RECONSTRUCTION_TOL = 1e-9


class Verdict(enum.Enum):
    PROPER_FREE = "proper_free"
    PROPER = "proper"
    NOT_PROPER = "not_proper"


@dataclass(frozen=True)
class ProperFreeReport:
    """Outcome of :func:`is_proper_free`.

    For IV_4, ``commensurable`` records whether the rates have rational
    ratios, ``irregular_free`` whether the action avoids 3-Sasakian irregular
    points (the rates are distinct) and ``integers`` the primitive integer
    triple proportional to the rates when one exists.  ``exact`` tells
    whether the verdict was reached in exact arithmetic.
    """

    verdict: Verdict
    commensurable: bool | None = None
    irregular_free: bool | None = None
    integers: tuple[int, ...] | None = None
    exact: bool = True

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "commensurable": self.commensurable,
            "irregular_free": self.irregular_free,
            "integers": None if self.integers is None else list(self.integers),
            "exact": self.exact,
        }


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, sympy.Basic))


def _exact_ratio(x, y):
    r = sympy.nsimplify(sympy.sympify(x) / sympy.sympify(y))
    return r if r.is_rational else None


def _float_ratio(x, y) -> Fraction | None:
    r = float(x) / float(y)
    f = Fraction(r).limit_denominator(DENOMINATOR_BOUND)
    return f if abs(float(f) - r) <= RECONSTRUCTION_TOL * max(1.0, abs(r)) else None


def _primitive(ratios: list) -> tuple[int, ...]:
    fracs = [Fraction(int(sympy.Rational(r).p), int(sympy.Rational(r).q)) if not isinstance(r, Fraction) else r for r in ratios]
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * den) for f in fracs]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def commensurability(params) -> tuple[bool, tuple[int, ...] | None, bool]:
    """(commensurable, primitive integer multiple, exact) for nonnegative rates."""
    exact = all(_is_exact(p) for p in params)
    nonzero = [p for p in params if (sympy.sympify(p) != 0 if exact else float(p) != 0.0)]
    if not nonzero:
        raise DomainError("all rates vanish: the generator is zero")
    ref = nonzero[0]
    ratios = []
    for p in params:
        if (sympy.sympify(p) == 0) if exact else float(p) == 0.0:
            ratios.append(Fraction(0))
            continue
        r = _exact_ratio(p, ref) if exact else _float_ratio(p, ref)
        if r is None:
            return False, None, exact
        ratios.append(r)
    return True, _primitive(ratios), exact


def _distinct(params, exact: bool) -> bool:
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            a, b = params[i], params[j]
            if exact:
                if sympy.simplify(sympy.sympify(a) - sympy.sympify(b)) == 0:
                    return False
            elif abs(float(a) - float(b)) <= RECONSTRUCTION_TOL * max(1.0, abs(float(a))):
                return False
    return True


def is_proper_free(label: FamilyLabel) -> ProperFreeReport:
    """Properness of the one-parameter reduction generated by an orbit.

    Every family other than IV_4 gives a proper free action.  IV_4(a, b, c)
    is proper exactly when the rates are commensurable; float rates are
    tested by rational reconstruction with denominators up to 10^6.
    """
    if label.name != "IV_4":
        return ProperFreeReport(Verdict.PROPER_FREE)
    params = label.params
    if any((sympy.sympify(p) < 0) if _is_exact(p) else float(p) < 0 for p in params):
        raise DomainError("rates must be nonnegative")
    ok, ints, exact = commensurability(params)
    if not ok:
        return ProperFreeReport(Verdict.NOT_PROPER, False, None, None, exact)
    return ProperFreeReport(Verdict.PROPER, True, _distinct(params, exact), ints, exact)
