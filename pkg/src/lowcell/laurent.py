"""Sparse integer Laurent polynomials in one variable v.

Coefficients live in Z and exponents in Z; the zero polynomial is the empty
coefficient map and has degree -inf.  Instances are immutable: every operation
returns a fresh polynomial.  The module also exposes a few helpers that work
on plain ``{exponent: coefficient}`` dicts, used by the Hecke-product inner
loops where wrapping every intermediate value would dominate the runtime.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

NEG_INF = float("-inf")


def add_into(acc: dict[int, int], src: Mapping[int, int], shift: int = 0, sign: int = 1) -> None:
    """acc += sign * v**shift * src, dropping zero coefficients in place."""
    for exp, c in src.items():
        e = exp + shift
        new = acc.get(e, 0) + sign * c
        if new:
            acc[e] = new
        else:
            acc.pop(e, None)


def mul_raw(p: Mapping[int, int], q: Mapping[int, int]) -> dict[int, int]:
    """Product of two raw coefficient dicts."""
    out: dict[int, int] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            new = out.get(e, 0) + c1 * c2
            if new:
                out[e] = new
            else:
                del out[e]
    return out


class LaurentPoly:
    """An element of Z[v, v^-1], stored as a sparse exponent -> coefficient map."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        if coeffs:
            self._c = {e: c for e, c in coeffs.items() if c}
        else:
            self._c = {}

    # -- construction -----------------------------------------------------

    @classmethod
    def _wrap(cls, raw: dict[int, int]) -> "LaurentPoly":
        """Adopt a zero-free dict without copying.  Caller must not reuse it."""
        p = cls.__new__(cls)
        p._c = raw
        return p

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._wrap({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._wrap({0: 1})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls._wrap({exp: coeff} if coeff else {})

    @classmethod
    def v_power(cls, exp: int) -> "LaurentPoly":
        return cls._wrap({exp: 1})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]]) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in pairs})

    # -- inspection --------------------------------------------------------

    def raw(self) -> Mapping[int, int]:
        """Read-only view of the coefficient dict (do not mutate)."""
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, exp: int) -> int:
        """Coefficient of v**exp (pi_exp extraction)."""
        return self._c.get(exp, 0)

    def degree(self):
        """Max exponent with nonzero coefficient; -inf for the zero polynomial."""
        return max(self._c) if self._c else NEG_INF

    def min_degree(self):
        return min(self._c) if self._c else NEG_INF

    def leading_coeff(self) -> int:
        return self._c[max(self._c)] if self._c else 0

    def to_pairs(self) -> list[list[int]]:
        """Serialized form: [exponent, coefficient] pairs, descending exponent."""
        return [[e, self._c[e]] for e in sorted(self._c, reverse=True)]

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._c.items())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._c)
        add_into(out, other._c)
        return LaurentPoly._wrap(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._c)
        add_into(out, other._c, sign=-1)
        return LaurentPoly._wrap(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({e: -c for e, c in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._wrap({e: c * other for e, c in self._c.items()})
        return LaurentPoly._wrap(mul_raw(self._c, other._c))

    __rmul__ = __mul__

    def shift(self, exp: int) -> "LaurentPoly":
        """Multiply by v**exp."""
        return LaurentPoly._wrap({e + exp: c for e, c in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly._wrap({-e: c for e, c in self._c.items()})

    def negative_part(self) -> "LaurentPoly":
        """Terms of strictly negative exponent."""
        return LaurentPoly._wrap({e: c for e, c in self._c.items() if e < 0})

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        chunks = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            sign = "-" if c < 0 else ("+" if chunks else "")
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "v" if e == 1 else ("v^-1" if e == -1 else f"v^{e}")
                body = var if mag == 1 else f"{mag}*{var}"
            chunks.append(f"{sign}{body}" if not chunks else f" {sign} {body}")
        return "".join(chunks)


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
