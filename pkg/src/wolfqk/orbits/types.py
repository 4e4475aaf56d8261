"""Decorated indecomposable types and their formal sums.

An indecomposable orthogonal type is recorded by its kind, its height k,
an eigenvalue parameter zeta and, for the self-paired kinds, a sign:

``ZERO``        Delta_k^{+-}(0), k even
``REAL``        Delta_k(zeta, -zeta), zeta real (zeta = 0 only for odd k)
``IMAGINARY``   Delta_k^{+-}(zeta, -zeta), zeta = ib with b > 0
``QUADRUPLE``   Delta_k(zeta, -zeta, conj zeta, -conj zeta), Re, Im > 0

zeta is kept normalised: nonnegative real part, and nonnegative imaginary
part when the real part vanishes (for quadruples both parts are positive,
since the four roots are interchangeable).
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import sympy

from ..signature import DomainError


class Kind(enum.Enum):
    ZERO = "zero"
    REAL = "real"
    IMAGINARY = "imaginary"
    QUADRUPLE = "quadruple"


_KIND_ORDER = {Kind.ZERO: 0, Kind.REAL: 1, Kind.IMAGINARY: 2, Kind.QUADRUPLE: 3}


def _is_exact(z) -> bool:
    return isinstance(z, sympy.Basic)


def _parts(z) -> tuple:
    if _is_exact(z):
        re_, im_ = z.as_real_imag()
        return sympy.nsimplify(re_), sympy.nsimplify(im_)
    z = complex(z)
    return z.real, z.imag


def normalize_zeta(kind: Kind, zeta):
    """Canonical representative of zeta for the given kind."""
    if kind is Kind.ZERO:
        return 0
    re_, im_ = _parts(zeta)
    exact = _is_exact(zeta)
    I = sympy.I if exact else 1j
    if kind is Kind.REAL:
        if im_ != 0:
            raise DomainError(f"real kind needs a real zeta, got {zeta}")
        return abs(re_) if exact else complex(abs(re_), 0.0)
    if kind is Kind.IMAGINARY:
        if re_ != 0:
            raise DomainError(f"imaginary kind needs an imaginary zeta, got {zeta}")
        if im_ == 0:
            raise DomainError("imaginary kind needs a nonzero zeta")
        return abs(im_) * I if exact else complex(0.0, abs(im_))
    if re_ == 0 or im_ == 0:
        raise DomainError(f"quadruple kind needs zeta off both axes, got {zeta}")
    return abs(re_) + abs(im_) * I if exact else complex(abs(re_), abs(im_))


@dataclass(frozen=True)
class IndecomposableType:
    kind: Kind
    height: int
    zeta: object = 0
    sign: int = 0

    def __post_init__(self):
        k = self.height
        if not isinstance(k, int) or k < 0:
            raise DomainError(f"height must be a nonnegative integer, got {k!r}")
        if self.kind is Kind.ZERO:
            if k % 2:
                raise DomainError("Delta_k(0) with one generator needs even height")
            if self.sign not in (1, -1):
                raise DomainError("Delta_k(0) needs a sign")
        elif self.kind is Kind.IMAGINARY:
            if self.sign not in (1, -1):
                raise DomainError("imaginary kinds need a sign")
        elif self.sign != 0:
            raise DomainError(f"{self.kind.value} kinds carry no sign")
        if self.kind is Kind.REAL and k % 2 == 0 and _parts(self.zeta)[0] == 0:
            raise DomainError("Delta_k(0,0) with k even is not indecomposable")
        object.__setattr__(self, "zeta", normalize_zeta(self.kind, self.zeta))

    @property
    def dimension(self) -> int:
        per = {Kind.ZERO: 1, Kind.REAL: 2, Kind.IMAGINARY: 2, Kind.QUADRUPLE: 4}[self.kind]
        return per * (self.height + 1)

    @property
    def signature(self) -> tuple[int, int]:
        k = self.height
        if self.kind is Kind.ZERO:
            middle = self.sign * (-1) ** (k // 2)
            return (k // 2 + (middle > 0), k // 2 + (middle < 0))
        if self.kind is Kind.IMAGINARY and k % 2 == 0:
            middle = self.sign * (-1) ** (k // 2)
            return (k + 2 * (middle > 0), k + 2 * (middle < 0))
        half = self.dimension // 2
        return (half, half)

    def params(self) -> tuple:
        """Real parameters carried by this summand (magnitudes of zeta)."""
        re_, im_ = _parts(self.zeta)
        if self.kind is Kind.ZERO:
            return ()
        if self.kind is Kind.REAL:
            return (re_,)
        if self.kind is Kind.IMAGINARY:
            return (im_,)
        return (re_, im_)

    def symbol(self) -> str:
        return format_type(self)

    def to_json(self) -> dict:
        re_, im_ = _parts(self.zeta)
        return {
            "kind": f"D{self.height}{ {1: '+', -1: '-', 0: ''}[self.sign] }",
            "family": self.kind.value,
            "height": self.height,
            "zeta": [float(re_), float(im_)],
            "sign": {1: "+", -1: "-", 0: None}[self.sign],
        }

    @classmethod
    def from_json(cls, d: dict) -> "IndecomposableType":
        sign = {"+": 1, "-": -1, None: 0}[d.get("sign")]
        return cls(Kind(d["family"]), int(d["height"]), complex(*d["zeta"]), sign)


def sort_key(t: IndecomposableType):
    re_, im_ = _parts(t.zeta)
    return (-t.height, _KIND_ORDER[t.kind], -t.sign, float(re_), float(im_))


@dataclass(frozen=True)
class TypeSum:
    """A multiset of indecomposable types, kept in canonical order."""

    summands: tuple[IndecomposableType, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=sort_key)))

    def __add__(self, other: "TypeSum") -> "TypeSum":
        return type_sum(self, other)

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    @property
    def dimension(self) -> int:
        return dimension(self)

    @property
    def signature(self) -> tuple[int, int]:
        return signature(self)

    @property
    def height(self) -> int:
        return height(self)

    def __str__(self) -> str:
        return format_type_sum(self)

    def to_json(self) -> list[dict]:
        return [t.to_json() for t in self.summands]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "TypeSum":
        return cls(tuple(IndecomposableType.from_json(d) for d in items))

    def isclose(self, other: "TypeSum", tol: float = 1e-6) -> bool:
        if len(self) != len(other):
            return False
        for a, b in zip(self.summands, other.summands):
            if (a.kind, a.height, a.sign) != (b.kind, b.height, b.sign):
                return False
            if abs(complex(a.zeta) - complex(b.zeta)) > tol * max(1.0, abs(complex(a.zeta))):
                return False
        return True


def type_sum(*sums: TypeSum) -> TypeSum:
    return TypeSum(tuple(t for s in sums for t in s.summands))


def dimension(ts: TypeSum) -> int:
    return sum(t.dimension for t in ts.summands)


def signature(ts: TypeSum) -> tuple[int, int]:
    p = sum(t.signature[0] for t in ts.summands)
    q = sum(t.signature[1] for t in ts.summands)
    return (p, q)


def height(ts: TypeSum) -> int:
    return max((t.height for t in ts.summands), default=0)


# --- type strings ------------------------------------------------------------

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_UNSUB = str.maketrans("₀₁₂₃₄₅₆₇₈₉⁺⁻−", "0123456789+--")


def _fmt_real(x) -> str:
    if _is_exact(x):
        x = sympy.nsimplify(x)
        return str(x) if not x.is_Integer else str(int(x))
    x = float(x)
    if abs(x - round(x)) <= 1e-9 * max(1.0, abs(x)):
        return str(int(round(x)))
    return f"{x:.6g}"


def _fmt_complex(re_, im_) -> str:
    if im_ == 0 or (not _is_exact(im_) and abs(float(im_)) <= 1e-12):
        return _fmt_real(re_)
    m = _fmt_real(abs(im_))
    neg = (im_ < 0) if _is_exact(im_) else float(im_) < 0
    imag = ("-" if neg else "") + ("i" if m == "1" else f"{m}i")
    if re_ == 0 or (not _is_exact(re_) and abs(float(re_)) <= 1e-12):
        return imag
    return _fmt_real(re_) + ("" if imag.startswith("-") else "+") + imag


def _args(t: IndecomposableType) -> str:
    if t.kind is Kind.ZERO:
        return "0"
    re_, im_ = _parts(t.zeta)
    if t.kind is Kind.QUADRUPLE:
        roots = [(re_, im_), (-re_, -im_), (re_, -im_), (-re_, im_)]
    else:
        roots = [(re_, im_), (-re_, -im_)]
    return ",".join(_fmt_complex(a, b) for a, b in roots)


def format_type(t: IndecomposableType) -> str:
    sign = {1: "⁺", -1: "⁻", 0: ""}[t.sign]
    return f"Δ{str(t.height).translate(_SUB)}{sign}({_args(t)})"


def format_type_sum(ts: TypeSum) -> str:
    """Canonical string, e.g. ``Δ₀⁺(i,-i) ⊕ 2Δ₀⁻(i,-i) ⊕ Δ₀⁺(0)``."""
    if not ts.summands:
        return "0"
    pieces = [format_type(t) for t in ts.summands]
    counts = Counter(pieces)
    out, seen = [], set()
    for p in pieces:
        if p in seen:
            continue
        seen.add(p)
        out.append(p if counts[p] == 1 else f"{counts[p]}{p}")
    return " ⊕ ".join(out)


_TOKEN = re.compile(r"^\s*(\d*)\s*(?:Δ|D|\\Delta)_?\{?(\d+)\}?\^?\{?([+-]?)\}?\s*\(([^)]*)\)\s*$")


def _parse_number(s: str):
    s = s.strip().replace("−", "-")
    if not s:
        raise DomainError("empty parameter")
    # "2i" -> "2*I", a lone "i" -> "I"
    s = re.sub(r"(?<=[0-9.)])\s*i(?![A-Za-z])", "*I", s)
    expr = sympy.sympify(re.sub(r"(?<![A-Za-z])i(?![A-Za-z])", "I", s))
    return sympy.nsimplify(expr)


def parse_type_sum(text: str, exact: bool = False) -> TypeSum:
    """Parse a type string, expanding the zero-parameter aliases.

    Accepts unicode sub/superscripts (``Δ₀⁺(i,−i)``), ASCII forms
    (``D0+(i,-i)``) and multiplicities (``2Δ₀⁻(−i,i)``).  The parameters
    ``(0,0)`` at even height and the four-root forms ``(a,-a,a,-a)`` and
    ``(ib,-ib,-ib,ib)`` are read as the sums they abbreviate.
    """
    text = text.translate(_UNSUB)
    out: list[IndecomposableType] = []
    for chunk in re.split(r"⊕|\\oplus|\s\+\s", text):
        if not chunk.strip():
            continue
        m = _TOKEN.match(chunk)
        if not m:
            raise DomainError(f"cannot parse type {chunk!r}")
        mult = int(m.group(1) or 1)
        k = int(m.group(2))
        sign = {"+": 1, "-": -1, "": 0}[m.group(3)]
        args = [_parse_number(a) for a in m.group(4).split(",")]
        for _ in range(mult):
            out.extend(_from_args(k, sign, args, exact))
    return TypeSum(tuple(out))


def _num(x, exact: bool):
    return x if exact else complex(x)


def _from_args(k: int, sign: int, args: list, exact: bool) -> list[IndecomposableType]:
    if len(args) == 1:
        if args[0] != 0:
            raise DomainError("a single parameter must be 0")
        return [IndecomposableType(Kind.ZERO, k, 0, sign)]
    z = args[0]
    re_, im_ = _parts(z)
    if len(args) == 2:
        if sympy.simplify(args[1] + z) != 0:
            raise DomainError(f"expected (z,-z), got {args}")
        if z == 0:
            if k % 2:
                if sign:
                    raise DomainError("Delta_k(0,0) at odd height carries no sign")
                return [IndecomposableType(Kind.REAL, k, _num(0, exact))]
            signs = (sign, sign) if sign else (1, -1)
            return [IndecomposableType(Kind.ZERO, k, 0, s) for s in signs]
        if im_ == 0:
            if sign:
                raise DomainError("real parameters carry no sign")
            return [IndecomposableType(Kind.REAL, k, _num(z, exact))]
        if re_ == 0:
            return [IndecomposableType(Kind.IMAGINARY, k, _num(z, exact), sign)]
        raise DomainError(f"complex zeta needs four roots, got {args}")
    if len(args) == 4:
        vals = [sympy.nsimplify(a) for a in args]
        if re_ != 0 and im_ != 0:
            return [IndecomposableType(Kind.QUADRUPLE, k, _num(z, exact))]
        if im_ == 0 and z != 0 and sorted(vals, key=sympy.default_sort_key) == sorted([z, -z, z, -z], key=sympy.default_sort_key):
            return [IndecomposableType(Kind.REAL, k, _num(z, exact)) for _ in range(2)]
        if re_ == 0 and z != 0:
            return [IndecomposableType(Kind.IMAGINARY, k, _num(z, exact), s) for s in (1, -1)]
    raise DomainError(f"unsupported parameter list {args}")


def summands_from(items: Iterable[IndecomposableType]) -> TypeSum:
    return TypeSum(tuple(items))
