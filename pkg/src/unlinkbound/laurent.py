"""Integer Laurent polynomials in one variable ``A``.

Values are immutable and kept in canonical form: a sorted tuple of
``(exponent, coefficient)`` pairs with no zero coefficients, so equality of
values is equality of term tuples.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = ["LaurentPoly", "add", "mul", "pow_scalar", "monomial", "equals", "ZERO", "ONE", "DELTA"]


def _normalize(terms: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    acc: dict[int, int] = {}
    for e, c in terms:
        acc[e] = acc.get(e, 0) + c
    return tuple(sorted((e, c) for e, c in acc.items() if c))


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        self._terms = _normalize(terms)
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple[tuple[int, int], ...]) -> "LaurentPoly":
        # caller guarantees canonical form
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def degree_span(self) -> tuple[int, int] | None:
        if not self._terms:
            return None
        return self._terms[0][0], self._terms[-1][0]

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _coerce(other)
        return LaurentPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        return pow_scalar(self, k)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``A**k``."""
        return LaurentPoly._raw(tuple((e + k, c) for e, c in self._terms))

    def substitute_inverse(self) -> "LaurentPoly":
        """``p(A) -> p(A**-1)``; the bracket of a mirror image."""
        return LaurentPoly((-e, c) for e, c in self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        return render(self)

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls._raw(((0, c),) if c else ())

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse(text)

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self._terms]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in data)


def _coerce(x: "LaurentPoly | int") -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    raise TypeError(f"cannot combine LaurentPoly with {type(x).__name__}")


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def pow_scalar(base: LaurentPoly, k: int) -> LaurentPoly:
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = ONE
    sq = base
    while k:
        if k & 1:
            result = result * sq
        k >>= 1
        if k:
            sq = sq * sq
    return result


def monomial(c: int, e: int) -> LaurentPoly:
    return LaurentPoly._raw(((e, c),) if c else ())


def equals(p: LaurentPoly, q: LaurentPoly) -> bool:
    return p == q


def render(p: LaurentPoly, var: str = "A") -> str:
    """Exponent-descending text, e.g. ``-A^3 + 2 + A^-1``."""
    if not p._terms:
        return "0"
    out = []
    for e, c in reversed(p._terms):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = var if e == 1 else f"{var}^{e}"
            body = power if mag == 1 else f"{mag}{power}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out)


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(?:(A)(?:\^(-?\d+))?)?")


def parse(text: str) -> LaurentPoly:
    """Inverse of :func:`render`."""
    s = text.strip()
    if s == "0":
        return ZERO
    terms = []
    pos = 0
    s = s.replace(" ", "")
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse Laurent polynomial at column {pos + 1}: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) is not None else 1
        else:
            exp = 0
        terms.append((exp, sign * coeff))
        pos = m.end()
    return LaurentPoly(terms)


ZERO = LaurentPoly._raw(())
ONE = LaurentPoly._raw(((0, 1),))
# loop value of the bracket, -A^2 - A^-2
DELTA = LaurentPoly._raw(((-2, -1), (2, -1)))
