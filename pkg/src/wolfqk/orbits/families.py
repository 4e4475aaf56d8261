"""The indecomposable table, the 24 families of so(3,4) and label matching."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import sympy

from ..signature import DomainError
from .types import IndecomposableType, Kind, TypeSum, _parts

Z, R, I, Q = Kind.ZERO, Kind.REAL, Kind.IMAGINARY, Kind.QUADRUPLE


class TableRow(NamedTuple):
    """A row of the indecomposable table: (kind, height, sign)."""

    kind: Kind
    height: int
    sign: int

    @property
    def dimension(self) -> int:
        return IndecomposableType(self.kind, self.height, _placeholder(self.kind), self.sign).dimension

    @property
    def signature(self) -> tuple[int, int]:
        return IndecomposableType(self.kind, self.height, _placeholder(self.kind), self.sign).signature


def _placeholder(kind: Kind) -> complex:
    return {Z: 0, R: 1.0, I: 1j, Q: 1 + 1j}[kind]


# every indecomposable orthogonal type of dimension <= 7, largest first
INDECOMPOSABLE_TABLE: tuple[TableRow, ...] = (
    TableRow(Z, 6, -1),
    TableRow(Z, 6, 1),
    TableRow(I, 2, -1),
    TableRow(R, 2, 0),
    TableRow(I, 2, 1),
    TableRow(Z, 4, 1),
    TableRow(Z, 4, -1),
    TableRow(Q, 0, 0),
    TableRow(I, 1, -1),
    TableRow(R, 1, 0),
    TableRow(I, 1, 1),
    TableRow(Z, 2, -1),
    TableRow(Z, 2, 1),
    TableRow(I, 0, 1),
    TableRow(R, 0, 0),
    TableRow(I, 0, -1),
    TableRow(Z, 0, 1),
    TableRow(Z, 0, -1),
)


class Slot(NamedTuple):
    kind: Kind
    height: int
    sign: int
    params: tuple[int, ...]  # indices into the family parameter vector


def _z(k, s):
    return Slot(Z, k, s, ())


def _r(k, p):
    return Slot(R, k, 0, (p,))


def _i(k, s, p):
    return Slot(I, k, s, (p,))


def _q(p, q):
    return Slot(Q, 0, 0, (p, q))


FAMILIES: dict[str, tuple[Slot, ...]] = {
    "I_1": (_z(6, 1),),
    "II_1": (_z(4, 1), _i(0, -1, 0)),
    "II_2": (_z(4, -1), _r(0, 0)),
    "II_3": (_r(2, 0), _z(0, -1)),
    "II_4": (_i(2, 1, 0), _z(0, 1)),
    "II_5": (_i(1, -1, 0), _z(2, 1)),
    "II_6": (_r(1, 0), _z(2, 1)),
    "II_7": (_i(1, 1, 0), _z(2, 1)),
    "III_1": (_q(0, 1), _z(2, 1)),
    "III_2": (_z(2, -1), _r(0, 0), _i(0, -1, 1)),
    "III_3": (_i(0, 1, 0), _z(2, 1), _i(0, -1, 1)),
    "III_4": (_z(2, 1), _r(0, 0), _r(0, 1)),
    "III_5": (_i(1, -1, 0), _r(0, 1), _z(0, -1)),
    "III_6": (_r(1, 0), _r(0, 1), _z(0, -1)),
    "III_7": (_i(1, 1, 0), _r(0, 1), _z(0, -1)),
    "III_8": (_i(1, -1, 0), _z(0, 1), _i(0, -1, 1)),
    "III_9": (_r(1, 0), _z(0, 1), _i(0, -1, 1)),
    "III_10": (_i(1, 1, 0), _z(0, 1), _i(0, -1, 1)),
    "IV_1": (_q(0, 1), _r(0, 2), _z(0, -1)),
    "IV_2": (_q(0, 1), _z(0, 1), _i(0, -1, 2)),
    "IV_3": (_i(0, 1, 0), _r(0, 1), _i(0, -1, 2), _z(0, -1)),
    "IV_4": (_i(0, 1, 0), _z(0, 1), _i(0, -1, 1), _i(0, -1, 2)),
    "IV_5": (_r(0, 0), _r(0, 1), _r(0, 2), _z(0, -1)),
    "IV_6": (_r(0, 0), _r(0, 1), _z(0, 1), _i(0, -1, 2)),
}

FAMILY_ORDER = tuple(FAMILIES)


def parameter_count(name: str) -> int:
    return 1 + max((p for s in FAMILIES[name] for p in s.params), default=-1)


def family_height(name: str) -> int:
    return max(s.height for s in FAMILIES[name])


def _canonical_name(name: str) -> str:
    key = name.replace(" ", "").replace("_", "").upper()
    for n in FAMILIES:
        if n.replace("_", "") == key:
            return n
    raise DomainError(f"unknown family {name!r}")


@dataclass(frozen=True)
class FamilyLabel:
    name: str
    params: tuple = ()

    def __post_init__(self):
        name = _canonical_name(self.name)
        object.__setattr__(self, "name", name)
        params = tuple(self.params)
        if len(params) != parameter_count(name):
            raise DomainError(f"{name} takes {parameter_count(name)} parameters, got {len(params)}")
        # interchangeable slots are reported in increasing order
        object.__setattr__(self, "params", _sort_interchangeable(name, params))

    @property
    def height(self) -> int:
        return family_height(self.name)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(_fmt(p) for p in self.params)})"

    def isclose(self, other: "FamilyLabel", tol: float = 1e-6) -> bool:
        return self.name == other.name and all(
            abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a))) for a, b in zip(self.params, other.params)
        )

    def to_json(self) -> dict:
        return {"family": self.name, "params": [float(p) for p in self.params]}


def _fmt(p) -> str:
    if isinstance(p, sympy.Basic):
        return str(p)
    return f"{float(p):.10g}"


class ClassificationIncomplete(LookupError):
    """No family of the table matches the given type sum."""

    def __init__(self, ts: TypeSum):
        super().__init__(f"no family matches {ts}")
        self.type_sum = ts


# --- aliases -------------------------------------------------------------------

# A concrete slot: (kind, height, sign, ref) where ref is a parameter index for
# REAL/IMAGINARY and a pair of indices for QUADRUPLE.
_Concrete = tuple


def _expansions(slot: Slot) -> list[tuple[list[_Concrete], dict[int, int], int]]:
    """Ways a slot can appear: natively or through an alias at a zero parameter.

    Returns (concrete slots, parameters forced to zero, alias count).
    """
    kind, k, s, ps = slot
    out = [([(kind, k, s, ps)], {}, 0)]
    if kind is R and k in (0, 2):
        out.append(([(Z, k, 1, ()), (Z, k, -1, ())], {ps[0]: 0}, 1))
    elif kind is I and (k == 0 or (k == 2 and s == 1)):
        out.append(([(Z, k, s, ()), (Z, k, s, ())], {ps[0]: 0}, 1))
    elif kind is Q:
        a, b = ps
        for sub, forced, n in _expansions(_r(0, a)):
            out.append((sub * 2, {**forced, b: 0}, 1 + n))
        for subp, fp, n1 in _expansions(_i(0, 1, b)):
            for subm, fm, n2 in _expansions(_i(0, -1, b)):
                if fp == fm:
                    out.append((subp + subm, {**fp, a: 0}, 1 + n1 + n2))
    return out


def _row_expansions(name: str):
    slots = FAMILIES[name]
    for combo in itertools.product(*(_expansions(s) for s in slots)):
        concrete, forced, aliases = [], {}, 0
        for c, f, n in combo:
            concrete.extend(c)
            forced.update(f)
            aliases += n
        yield concrete, forced, aliases


def _summand_value(t: IndecomposableType):
    re_, im_ = _parts(t.zeta)
    if t.kind is R:
        return (re_,)
    if t.kind is I:
        return (im_,)
    if t.kind is Q:
        return (re_, im_)
    return ()


def _close(a, b, tol: float) -> bool:
    if isinstance(a, sympy.Basic) or isinstance(b, sympy.Basic):
        return sympy.simplify(sympy.nsimplify(a) - sympy.nsimplify(b)) == 0
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a)), abs(float(b)))


def _native_ok(t: IndecomposableType) -> bool:
    re_, im_ = _parts(t.zeta)
    if t.kind is R and t.height % 2 == 0:
        return re_ != 0
    return True


def _assign(concrete, summands, forced, n, tol):
    """Backtracking bijection between concrete slots and summands."""
    params: dict[int, object] = dict(forced)
    used = [False] * len(summands)

    def rec(i):
        if i == len(concrete):
            return True
        kind, k, s, ref = concrete[i]
        for j, t in enumerate(summands):
            if used[j] or (t.kind, t.height, t.sign) != (kind, k, s) or not _native_ok(t):
                continue
            vals = _summand_value(t)
            saved = dict(params)
            ok = True
            for idx, v in zip(ref, vals):
                if idx in params:
                    if not _close(params[idx], v, tol):
                        ok = False
                        break
                else:
                    params[idx] = v
            if ok:
                used[j] = True
                if rec(i + 1):
                    return True
                used[j] = False
            params.clear()
            params.update(saved)
        return False

    if len(concrete) != len(summands) or not rec(0):
        return None
    return tuple(params.get(i, 0) for i in range(n))


def _sort_interchangeable(name: str, params: tuple) -> tuple:
    params = list(params)
    groups: dict[tuple, list[int]] = {}
    for s in FAMILIES[name]:
        if len(s.params) == 1:
            groups.setdefault((s.kind, s.height, s.sign), []).append(s.params[0])
    for idxs in groups.values():
        if len(idxs) > 1:
            vals = sorted((params[i] for i in idxs), key=lambda v: float(v))
            for i, v in zip(sorted(idxs), vals):
                params[i] = v
    return tuple(params)


def family_matches(ts: TypeSum, tol: float = 1e-6) -> list[tuple[int, str, tuple]]:
    """All (alias count, family, params) matches, best first."""
    found = []
    for name in FAMILY_ORDER:
        n = parameter_count(name)
        best = None
        for concrete, forced, aliases in _row_expansions(name):
            params = _assign(concrete, ts.summands, forced, n, tol)
            if params is not None and (best is None or aliases < best[0]):
                best = (aliases, _sort_interchangeable(name, params))
        if best is not None:
            found.append((best[0], name, best[1]))
    found.sort(key=lambda m: (m[0], FAMILY_ORDER.index(m[1])))
    return found


def family_label(ts: TypeSum, tol: float = 1e-6) -> FamilyLabel:
    """Family of a signature (3,4) type sum, preferring the fewest aliases."""
    if ts.dimension != 7 or ts.signature != (3, 4):
        raise DomainError(f"family labels need dimension 7 and signature (3,4), got {ts.dimension}, {ts.signature}")
    matches = family_matches(ts, tol)
    if not matches:
        raise ClassificationIncomplete(ts)
    _, name, params = matches[0]
    return FamilyLabel(name, params)


def family_type_sum(fl: FamilyLabel) -> TypeSum:
    """The type sum named by a label, applying aliases at zero parameters."""
    out: list[IndecomposableType] = []
    p = fl.params
    for slot in FAMILIES[fl.name]:
        vals = [p[i] for i in slot.params]
        for v in vals:
            if _negative(v):
                raise DomainError(f"parameters are magnitudes and must be >= 0, got {v}")
        out.extend(_slot_types(slot, vals))
    return TypeSum(tuple(out))


def _negative(v) -> bool:
    return bool(v < 0) if isinstance(v, sympy.Basic) else float(v) < 0


def _is_zero(v) -> bool:
    return bool(v == 0) if isinstance(v, sympy.Basic) else float(v) == 0.0


def _imag(v):
    return v * sympy.I if isinstance(v, sympy.Basic) else complex(0.0, float(v))


def _slot_types(slot: Slot, vals: list) -> list[IndecomposableType]:
    kind, k, s, _ = slot
    if kind is Z:
        return [IndecomposableType(Z, k, 0, s)]
    if kind is R:
        (a,) = vals
        if _is_zero(a) and k % 2 == 0:
            if k not in (0, 2):
                raise DomainError(f"Delta_{k}(0,0) is not defined")
            return [IndecomposableType(Z, k, 0, 1), IndecomposableType(Z, k, 0, -1)]
        return [IndecomposableType(R, k, a if isinstance(a, sympy.Basic) else complex(float(a)))]
    if kind is I:
        (b,) = vals
        if _is_zero(b):
            if k == 0 or (k == 2 and s == 1):
                return [IndecomposableType(Z, k, 0, s)] * 2
            raise DomainError(f"zero parameter is inadmissible for slot Delta_{k}^{'+' if s > 0 else '-'}(ib,-ib)")
        return [IndecomposableType(I, k, _imag(b), s)]
    a, b = vals
    if _is_zero(b):
        return _slot_types(_r(0, 0), [a]) * 2
    if _is_zero(a):
        return _slot_types(_i(0, 1, 0), [b]) + _slot_types(_i(0, -1, 0), [b])
    z = a + b * sympy.I if isinstance(a, sympy.Basic) or isinstance(b, sympy.Basic) else complex(float(a), float(b))
    return [IndecomposableType(Q, 0, z)]


def enumerate_signature_types(signature: tuple[int, int] = (3, 4), dim: int = 7) -> list[tuple[TableRow, ...]]:
    """All multisets of table rows with the given total dimension and signature."""
    rows = INDECOMPOSABLE_TABLE
    out = []

    def rec(start, acc, d, p):
        if d == dim:
            if p == signature[0]:
                out.append(tuple(acc))
            return
        for j in range(start, len(rows)):
            r = rows[j]
            if d + r.dimension <= dim:
                rec(j, acc + [r], d + r.dimension, p + r.signature[0])

    rec(0, [], 0, 0)
    return out
