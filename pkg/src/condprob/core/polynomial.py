"""Sparse monomials, binomials and rational polynomials over the p_{i|I}."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import DegenerateBinomialError, InputError
from .events import VarId


class Monomial:
    """An immutable product of variables with positive integer exponents.

    Factors are stored sorted by the canonical variable order.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping[VarId, int] | Iterable[tuple[VarId, int]] = ()):
        if isinstance(exponents, Mapping):
            exponents = exponents.items()
        acc: dict[VarId, int] = {}
        for var, exp in exponents:
            if exp < 0:
                raise InputError(f"negative exponent for {var}")
            if exp:
                acc[var] = acc.get(var, 0) + exp
        self._items = tuple(sorted(acc.items(), key=lambda kv: kv[0].key))
        self._hash = hash(self._items)

    @classmethod
    def of(cls, *variables: VarId) -> Monomial:
        acc: dict[VarId, int] = {}
        for v in variables:
            acc[v] = acc.get(v, 0) + 1
        return cls(acc)

    @property
    def items(self) -> tuple[tuple[VarId, int], ...]:
        return self._items

    @property
    def exponents(self) -> dict[VarId, int]:
        return dict(self._items)

    @property
    def support(self) -> frozenset[VarId]:
        return frozenset(v for v, _ in self._items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    def exponent(self, var: VarId) -> int:
        for v, e in self._items:
            if v == var:
                return e
        return 0

    def is_one(self) -> bool:
        return not self._items

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self._items)

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self._items + other._items)

    def divides(self, other: Monomial) -> bool:
        theirs = dict(other._items)
        return all(theirs.get(v, 0) >= e for v, e in self._items)

    def __truediv__(self, other: Monomial) -> Monomial:
        mine = dict(self._items)
        for v, e in other._items:
            if mine.get(v, 0) < e:
                raise InputError(f"{other} does not divide {self}")
            mine[v] -= e
        return Monomial(mine)

    def gcd(self, other: Monomial) -> Monomial:
        theirs = dict(other._items)
        return Monomial({v: min(e, theirs[v]) for v, e in self._items if v in theirs})

    def lcm(self, other: Monomial) -> Monomial:
        acc = dict(self._items)
        for v, e in other._items:
            acc[v] = max(acc.get(v, 0), e)
        return Monomial(acc)

    def evaluate(self, values: Mapping[VarId, object]):
        result = 1
        for v, e in self._items:
            result = result * values[v] ** e
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def name(self, ground: int | None = None, sep: str = "*") -> str:
        if not self._items:
            return "1"
        parts = []
        for v, e in self._items:
            parts.append(v.name(ground) if e == 1 else f"{v.name(ground)}^{e}")
        return sep.join(parts)

    def __str__(self) -> str:
        return self.name()

    def __repr__(self) -> str:
        return f"Monomial({self.name()})"


ONE = Monomial()


def _rank(v: VarId) -> tuple:
    size, event, i = v.key
    return (-size, tuple(-x for x in event), -i)


def canonical_key(mono: Monomial) -> tuple:
    """Sort key of the canonical term order.

    Degree first, then lex with the canonical variable order as priority:
    the first variable (smallest event) is the most significant.
    """
    return (mono.degree, tuple((_rank(v), e) for v, e in mono.items))


@dataclass(frozen=True)
class Binomial:
    """``plus - minus``; orientation is kept as given, see :meth:`canonical`."""

    plus: Monomial
    minus: Monomial

    def __post_init__(self):
        if self.plus == self.minus:
            raise DegenerateBinomialError(f"degenerate binomial {self.plus} - {self.minus}")

    @property
    def variables(self) -> frozenset[VarId]:
        return self.plus.support | self.minus.support

    @property
    def degree(self) -> int:
        return max(self.plus.degree, self.minus.degree)

    def is_canonical(self) -> bool:
        return canonicalize_binomial(self) == self

    def canonical(self) -> Binomial:
        return canonicalize_binomial(self)

    def negated(self) -> Binomial:
        return Binomial(self.minus, self.plus)

    def exponent_vector(self, columns: Iterable[VarId]) -> list[int]:
        """Integer vector u = u+ - u- over the given column order."""
        return [self.plus.exponent(v) - self.minus.exponent(v) for v in columns]

    def to_polynomial(self) -> Polynomial:
        return Polynomial({self.plus: 1, self.minus: -1})

    def evaluate(self, values: Mapping[VarId, object]):
        return self.plus.evaluate(values) - self.minus.evaluate(values)

    def sort_key(self) -> tuple:
        """Degree, then the variables of each canonical side in canonical order."""
        c = self.canonical()
        return (c.degree, tuple(v.key for v, _ in c.plus.items), tuple(v.key for v, _ in c.minus.items))

    def name(self, ground: int | None = None, sep: str = "*") -> str:
        return f"{self.plus.name(ground, sep)} - {self.minus.name(ground, sep)}"

    def __str__(self) -> str:
        return self.name()


def canonicalize_binomial(b: Binomial) -> Binomial:
    """Strip the common factor and orient so the canonically larger side is ``plus``."""
    common = b.plus.gcd(b.minus)
    plus, minus = b.plus / common, b.minus / common
    if canonical_key(plus) < canonical_key(minus):
        plus, minus = minus, plus
    return Binomial(plus, minus)


def _coerce(c):
    if isinstance(c, float):
        return c
    return Fraction(c)


class Polynomial:
    """Sparse polynomial with rational (or, for evaluation only, float) coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[Monomial, object] = {}
        for mono, coeff in terms:
            acc[mono] = acc.get(mono, 0) + _coerce(coeff)
        self._terms = {m: c for m, c in acc.items() if c != 0}

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls({ONE: c})

    @classmethod
    def variable(cls, v: VarId) -> Polynomial:
        return cls({Monomial.of(v): 1})

    @classmethod
    def linear_form(cls, variables: Iterable[VarId]) -> Polynomial:
        return cls([(Monomial.of(v), 1) for v in variables])

    @property
    def terms(self) -> dict[Monomial, object]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, 0)

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(list(self._terms.items()) + list(_as_poly(other)._terms.items()))

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-_as_poly(other))

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, Monomial):
            return Polynomial({m * other: c for m, c in self._terms.items()})
        if not isinstance(other, (Polynomial, Binomial)):
            c = _coerce(other)
            return Polynomial({m: k * c for m, k in self._terms.items()})
        other = _as_poly(other)
        out: dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def evaluate(self, values: Mapping[VarId, object]):
        return sum((c * m.evaluate(values) for m, c in self._terms.items()), 0)

    def leading_term(self, order) -> tuple[Monomial, object]:
        if not self._terms:
            raise InputError("zero polynomial has no leading term")
        mono = max(self._terms, key=order.key)
        return mono, self._terms[mono]

    def as_binomial(self) -> Binomial | None:
        """The binomial m1 - m2 if this polynomial has that exact shape."""
        if len(self._terms) != 2:
            return None
        (m1, c1), (m2, c2) = self._terms.items()
        if c1 == 1 and c2 == -1:
            return Binomial(m1, m2)
        if c1 == -1 and c2 == 1:
            return Binomial(m2, m1)
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, (Binomial, int, Fraction)):
            other = _as_poly(other)
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def name(self, ground: int | None = None, sep: str = "*") -> str:
        if not self._terms:
            return "0"
        ordered = sorted(self._terms.items(), key=lambda mc: canonical_key(mc[0]), reverse=True)
        out = ""
        for k, (mono, c) in enumerate(ordered):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            body = mono.name(ground, sep)
            if mono.is_one():
                body = str(mag)
            elif mag != 1:
                body = f"{mag}{sep}{body}"
            if k == 0:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.name()

    def __repr__(self) -> str:
        return f"Polynomial({self.name()})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, Binomial):
        return x.to_polynomial()
    if isinstance(x, Monomial):
        return Polynomial({x: 1})
    return Polynomial.constant(x)


def as_polynomial(x) -> Polynomial:
    return _as_poly(x)
