"""Sparse multivariate polynomials over QQ or GF(p).

Variables are ``x[s,t]`` for ``1 <= s <= n`` (row) and ``1 <= t <= m``
(column).  They are indexed column-major, so that ``x[1,1] > x[2,1] > ... >
x[n,1] > x[1,2] > ...`` in the default variable priority, and dropping columns
from the right deletes a contiguous tail of the exponent vector.

A monomial is a plain tuple of ``N = n*m`` non-negative exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Mapping

from .field import FieldSpec, QQ

Monomial = tuple[int, ...]


class FrameError(ValueError):
    """Operands live in different rings, or an index falls outside the frame."""


@dataclass(frozen=True)
class Frame:
    """The variable set ``x[s,t]``, ``1 <= s <= n``, ``1 <= t <= m``."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise FrameError(f"frame dimensions must be positive, got ({self.n}, {self.m})")

    @property
    def nvars(self) -> int:
        return self.n * self.m

    def index(self, s: int, t: int) -> int:
        if not (1 <= s <= self.n and 1 <= t <= self.m):
            raise FrameError(f"x[{s},{t}] is outside the frame n={self.n}, m={self.m}")
        return (t - 1) * self.n + (s - 1)

    def position(self, k: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        return k % self.n + 1, k // self.n + 1

    def name(self, k: int) -> str:
        s, t = self.position(k)
        return f"x[{s},{t}]"

    def column_of(self, k: int) -> int:
        return k // self.n + 1


def degree(mono: Monomial) -> int:
    return sum(mono)


@dataclass(frozen=True)
class MonomialOrder:
    """A graded reverse lexicographic or lexicographic order.

    ``priority`` lists variable indices from most to least significant; the
    default is the identity permutation.
    """

    kind: str = "grevlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def _perm(self, mono: Monomial) -> tuple[int, ...]:
        if self.priority is None:
            return mono
        return tuple(mono[k] for k in self.priority)

    def key(self, mono: Monomial) -> tuple:
        """Sort key: larger key means larger monomial."""
        e = self._perm(mono)
        if self.kind == "lex":
            return e
        return (sum(e),) + tuple(-x for x in reversed(e))

    def compare(self, a: Monomial, b: Monomial) -> int:
        """Return -1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
        if len(a) != len(b):
            raise FrameError("monomials have different numbers of variables")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    # Encoded monomials are used inside the Groebner engine: the smallest
    # encoding is the largest monomial, and multiplication is componentwise
    # addition of encodings.
    def encode(self, mono: Monomial) -> tuple[int, ...]:
        e = self._perm(mono)
        if self.kind == "lex":
            return tuple(-x for x in e)
        return (-sum(e),) + tuple(reversed(e))

    def decode(self, enc: tuple[int, ...]) -> Monomial:
        if self.kind == "lex":
            e = tuple(-x for x in enc)
        else:
            e = tuple(reversed(enc[1:]))
        if self.priority is None:
            return e
        out = [0] * len(e)
        for pos, k in enumerate(self.priority):
            out[k] = e[pos]
        return tuple(out)


GREVLEX = MonomialOrder("grevlex")


@dataclass(frozen=True)
class PolyRing:
    """Frame, coefficient field and monomial order of a polynomial ring."""

    frame: Frame
    field: FieldSpec = QQ
    order: MonomialOrder = GREVLEX

    @property
    def nvars(self) -> int:
        return self.frame.nvars

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field(c)})

    def var(self, s: int, t: int) -> "Polynomial":
        k = self.frame.index(s, t)
        mono = tuple(1 if i == k else 0 for i in range(self.nvars))
        return Polynomial(self, {mono: self.field.one})

    def monomial(self, mono: Monomial, coeff=1) -> "Polynomial":
        if len(mono) != self.nvars:
            raise FrameError("monomial length does not match the frame")
        return Polynomial(self, {tuple(mono): self.field(coeff)})

    def with_field(self, field: FieldSpec) -> "PolyRing":
        return PolyRing(self.frame, field, self.order)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.frame, self.field, order)


class Polynomial:
    """An immutable polynomial; ``terms`` is strictly descending in the ring's order."""

    __slots__ = ("ring", "_data", "__dict__")

    def __init__(self, ring: PolyRing, data: Mapping[Monomial, object], *, _clean: bool = False):
        self.ring = ring
        if _clean:
            self._data = dict(data)
        else:
            f = ring.field
            nv = ring.nvars
            clean = {}
            for mono, c in data.items():
                if len(mono) != nv:
                    raise FrameError("monomial length does not match the frame")
                c = f(c)
                if c:
                    clean[tuple(mono)] = c
            self._data = clean

    @cached_property
    def terms(self) -> tuple[tuple[Monomial, object], ...]:
        key = self.ring.order.key
        return tuple(sorted(self._data.items(), key=lambda t: key(t[0]), reverse=True))

    def coefficients(self) -> dict[Monomial, object]:
        return dict(self._data)

    def coeff(self, mono: Monomial):
        return self._data.get(tuple(mono), self.ring.field.zero)

    def is_zero(self) -> bool:
        return not self._data

    def __bool__(self) -> bool:
        return bool(self._data)

    def __len__(self) -> int:
        return len(self._data)

    @property
    def leading_monomial(self) -> Monomial:
        if not self._data:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    @property
    def leading_coefficient(self):
        if not self._data:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    @cached_property
    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if inhomogeneous or zero."""
        degs = {sum(m) for m in self._data}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self._data or self.homogeneous_degree is not None

    def total_degree(self) -> int:
        return max((sum(m) for m in self._data), default=-1)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring.frame != self.ring.frame or other.ring.field != self.ring.field:
            raise FrameError("polynomials live in different frames or fields")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int) or _is_scalar(other):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self._data.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self._data.items()}, _clean=True)

    def monic(self) -> "Polynomial":
        if not self._data:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient))

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): f.mul(v, c) for m, v in self._data.items()},
            _clean=bool(c),
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.ring.frame == other.ring.frame
                and self.ring.field == other.ring.field
                and self._data == other._data
            )
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.frame, self.ring.field, frozenset(self._data.items())))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)

    def evaluate(self, point: Iterable) -> object:
        """Evaluate at a point given as a sequence of N field elements."""
        f = self.ring.field
        pt = [f(v) for v in point]
        total = f.zero
        for mono, c in self._data.items():
            val = c
            for k, e in enumerate(mono):
                if e:
                    val = f.mul(val, f(pt[k] ** e) if f.characteristic == 0 else pow(pt[k], e, f.characteristic))
            total = f.add(total, val)
        return total

    def with_ring(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret the coefficients in another ring on the same frame."""
        if ring.frame != self.ring.frame:
            raise FrameError("cannot move a polynomial to a different frame")
        if ring.field == self.ring.field:
            return Polynomial(ring, self._data, _clean=True)
        src = self.ring.field
        return Polynomial(ring, {m: src.to_fraction(c) for m, c in self._data.items()})


def _is_scalar(x) -> bool:
    from fractions import Fraction

    import gmpy2

    return isinstance(x, (Fraction, type(gmpy2.mpq(0)), type(gmpy2.mpz(0))))


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    p = a.ring.field.characteristic
    out = dict(a._data)
    for m, c in b._data.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                del out[m]
    return Polynomial(a.ring, out, _clean=True)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    p = a.ring.field.characteristic
    out: dict = {}
    for ma, ca in a._data.items():
        for mb, cb in b._data.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(mono, 0) + ca * cb
            if p:
                v %= p
            out[mono] = v
    return Polynomial(a.ring, {m: c for m, c in out.items() if c}, _clean=True)


def monomial_cmp(a: Monomial, b: Monomial, order: MonomialOrder = GREVLEX) -> int:
    return order.compare(a, b)


def specialize(p: Polynomial, keep_cols: Iterable[int], relabel: bool = True) -> Polynomial:
    """Set every variable ``x[s,t]`` with ``t`` outside ``keep_cols`` to zero.

    With ``relabel`` the result lives in the frame on the kept columns
    (renumbered ``1..len(keep_cols)`` in increasing order); otherwise it stays
    in the original frame.
    """
    frame = p.ring.frame
    keep = sorted(set(keep_cols))
    for t in keep:
        if not 1 <= t <= frame.m:
            raise FrameError(f"column {t} is outside the frame m={frame.m}")
    n = frame.n
    dropped = [k for k in range(frame.nvars) if frame.column_of(k) not in keep]
    kept_data = {mono: c for mono, c in p._data.items() if not any(mono[k] for k in dropped)}
    if not relabel:
        return Polynomial(p.ring, kept_data, _clean=True)
    if not keep:
        # no variables left: report the constant term in a one-column frame
        const = kept_data.get((0,) * frame.nvars, 0)
        ring = PolyRing(Frame(n, 1), p.ring.field, MonomialOrder(p.ring.order.kind))
        return ring.constant(const) if const else ring.zero()
    # a custom variable priority does not survive relabelling
    ring = PolyRing(Frame(n, len(keep)), p.ring.field, MonomialOrder(p.ring.order.kind))
    out = {}
    for mono, c in kept_data.items():
        new = []
        for t in keep:
            new.extend(mono[(t - 1) * n : t * n])
        out[tuple(new)] = c
    return Polynomial(ring, out, _clean=True)


def format_monomial(mono: Monomial, frame: Frame) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e == 1:
            parts.append(frame.name(k))
        elif e > 1:
            parts.append(f"{frame.name(k)}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Render in the syntax accepted by :func:`quadreg.parser.parse_poly`."""
    if not p._data:
        return "0"
    f = p.ring.field
    out = []
    for mono, c in p.terms:
        s = f.to_str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        body = format_monomial(mono, p.ring.frame)
        if body and s == "1":
            text = body
        elif body:
            text = f"{s}*{body}"
        else:
            text = s
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


def linear_form(ring: PolyRing, coeffs: Iterable) -> Polynomial:
    """The linear form ``sum_k coeffs[k] * var_k``."""
    nv = ring.nvars
    data = {}
    for k, c in enumerate(coeffs):
        mono = tuple(1 if i == k else 0 for i in range(nv))
        data[mono] = c
    return Polynomial(ring, data)
