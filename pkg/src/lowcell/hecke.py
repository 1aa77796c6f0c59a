"""The Hecke algebra of a weighted system, in the standard basis.

Over Z[v, v^-1] the algebra has basis T_w with T_s^2 = 1 + (v_s - v_s^-1) T_s
where v_s = v^{L(s)}, and T_w T_s = T_{ws} whenever l(ws) > l(w).  Products
are computed letter by letter along the right factor's canonical word, inside
a fixed ball of the group: a product whose support would leave the ball raises
OutOfBallError, so callers must enumerate a ball of radius at least
l(x) + l(y) before multiplying T_x T_y.

Internally coefficients travel as plain ``{exponent: int}`` dicts keyed by
Element ("raw" form); the public surface wraps them into LaurentPoly.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .coxeter import Element, GroupBall, shortlex_key
from .errors import OutOfBallError
from .laurent import NEG_INF, LaurentPoly, add_into, mul_raw

Raw = dict[Element, dict[int, int]]


class HeckeElement:
    """An element of the Hecke algebra: Element -> LaurentPoly, zero-free."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Element, LaurentPoly]):
        self.coeffs = {w: p for w, p in coeffs.items() if not p.is_zero()}

    def items(self) -> list[tuple[Element, LaurentPoly]]:
        return sorted(self.coeffs.items(), key=lambda kv: shortlex_key(kv[0]))

    def coeff(self, w: Element) -> LaurentPoly:
        return self.coeffs.get(w, LaurentPoly.zero())

    def degree(self):
        """Max degree over all coefficients (-inf for zero)."""
        return max((p.degree() for p in self.coeffs.values()), default=NEG_INF)

    def support(self) -> list[Element]:
        return sorted(self.coeffs, key=shortlex_key)

    def to_pairs(self) -> list[list]:
        """Serialized form: [element-string, poly-pairs], ShortLex order."""
        return [[w.letters(), p.to_pairs()] for w, p in self.items()]

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({p})*T[{w}]" for w, p in self.items())


def wrap_raw(raw: Raw) -> HeckeElement:
    return HeckeElement({w: LaurentPoly(pd) for w, pd in raw.items() if pd})


class HeckeAlgebra:
    """T-basis computations over a fixed group ball."""

    def __init__(self, ball: GroupBall):
        self.ball = ball
        self.group = ball.group
        self.config = ball.group.config
        self._vexp = ball.group.config.weights()
        self._bar_rows: dict[Element, Raw] = {}
        self._bar_level = -1
        self._tprod: dict[tuple[Element, Element], Raw] = {}

    # -- raw product machinery ------------------------------------------------

    def t_raw(self, w: Element) -> Raw:
        return {w: {0: 1}}

    def mul_gen_raw(self, raw: Raw, g: int) -> Raw:
        """raw * T_g."""
        out: Raw = {}
        ball = self.ball
        a = self._vexp[g]
        for w, pd in raw.items():
            u = ball.right(w, g)
            if u is None:
                raise OutOfBallError(
                    f"product support left the radius-{ball.radius} ball at {w}*{'rst'[g]}"
                )
            slot = out.get(u)
            if slot is None:
                out[u] = dict(pd)
            else:
                add_into(slot, pd)
                if not slot:
                    del out[u]
            if u.length < w.length:
                # descent: T_w T_g = T_{wg} + (v_g - v_g^-1) T_w
                slot = out.setdefault(w, {})
                add_into(slot, pd, shift=a)
                add_into(slot, pd, shift=-a, sign=-1)
                if not slot:
                    del out[w]
        return out

    def mul_word_raw(self, raw: Raw, word: Iterable[int]) -> Raw:
        for g in word:
            raw = self.mul_gen_raw(raw, g)
        return raw

    def scale_into(self, acc: Raw, raw: Raw, poly: Mapping[int, int], sign: int = 1) -> None:
        """acc += sign * raw * poly."""
        for w, pd in raw.items():
            term = mul_raw(pd, poly)
            if term:
                slot = acc.setdefault(w, {})
                add_into(slot, term, sign=sign)
                if not slot:
                    del acc[w]

    def multiply_raw(self, h1: Raw, h2: Raw) -> Raw:
        out: Raw = {}
        for w, pd in sorted(h2.items(), key=lambda kv: shortlex_key(kv[0])):
            self.scale_into(out, self.mul_word_raw(h1, w.word), pd)
        return out

    def t_product_raw(self, x: Element, y: Element) -> Raw:
        """T_x * T_y (memoized; shared copies, do not mutate)."""
        key = (x, y)
        cached = self._tprod.get(key)
        if cached is None:
            cached = self.mul_word_raw(self.t_raw(x), y.word)
            self._tprod[key] = cached
        return cached

    def clear_product_cache(self) -> None:
        self._tprod.clear()

    def product_scan(self, x: Element, radius: int,
                     visit: Callable[[Element, Raw], None]) -> None:
        """Call visit(y, T_x * T_y) for every y in the radius ball.

        Walks a spanning tree of the ball so each y costs one generator
        multiplication; the raw dicts passed to `visit` are transient.
        """
        if radius > self.ball.radius:
            raise OutOfBallError(
                f"scan radius {radius} exceeds ball radius {self.ball.radius}"
            )
        seen = {self.group.identity}

        def rec(y: Element, raw: Raw) -> None:
            visit(y, raw)
            if y.length == radius:
                return
            for g in range(3):
                y2 = self.ball.right(y, g)
                if y2 is not None and y2.length == y.length + 1 and y2 not in seen:
                    seen.add(y2)
                    rec(y2, self.mul_gen_raw(raw, g))

        rec(self.group.identity, self.t_raw(x))

    # -- public wrappers --------------------------------------------------------

    def unit(self) -> HeckeElement:
        return wrap_raw(self.t_raw(self.group.identity))

    def t_basis(self, w: Element) -> HeckeElement:
        return wrap_raw(self.t_raw(w))

    def t_product(self, x: Element, y: Element) -> HeckeElement:
        return wrap_raw(self.t_product_raw(x, y))

    def multiply(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        raw1 = {w: dict(p.raw()) for w, p in h1.coeffs.items()}
        raw2 = {w: dict(p.raw()) for w, p in h2.coeffs.items()}
        return wrap_raw(self.multiply_raw(raw1, raw2))

    def f_poly(self, x: Element, y: Element, z: Element) -> LaurentPoly:
        """Structure constant: the coefficient of T_z in T_x T_y."""
        pd = self.t_product_raw(x, y).get(z)
        return LaurentPoly(pd) if pd else LaurentPoly.zero()

    def beta(self, x: Element, y: Element, z: Element) -> int:
        """Top coefficient pi_N(f_{x,y,z^-1}) of the structure constant."""
        bound = self.group.classification().bound
        zinv = self.group.inverse(z)
        pd = self.t_product_raw(x, y).get(zinv)
        return pd.get(bound, 0) if pd else 0

    # -- bar involution -----------------------------------------------------------

    def _build_bar_rows(self, up_to: int) -> None:
        group = self.group
        for level in range(self._bar_level + 1, min(up_to, len(self.ball.levels) - 1) + 1):
            for w in self.ball.levels[level]:
                if level == 0:
                    self._bar_rows[w] = {w: {0: 1}}
                    continue
                parent = group.element(w.word[:-1])
                g = w.word[-1]
                a = self._vexp[g]
                prev = self._bar_rows[parent]
                row = self.mul_gen_raw(prev, g)
                # bar(T_g) = T_g - (v_g - v_g^-1) T_e, so subtract the scaled parent row
                for u, pd in prev.items():
                    slot = row.setdefault(u, {})
                    add_into(slot, pd, shift=-a)
                    add_into(slot, pd, shift=a, sign=-1)
                    if not slot:
                        del row[u]
                self._bar_rows[w] = row
        self._bar_level = max(self._bar_level, up_to)

    def bar_row(self, w: Element) -> Raw:
        """bar(T_w) in the T basis (shared; do not mutate)."""
        row = self._bar_rows.get(w)
        if row is None:
            if w not in self.ball.index:
                raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
            self._build_bar_rows(w.length)
            row = self._bar_rows[w]
        return row

    def bar(self, h: HeckeElement) -> HeckeElement:
        """The bar involution: v -> v^-1, T_w -> T_{w^-1}^-1."""
        out: Raw = {}
        for w, p in h.coeffs.items():
            barp = {-e: c for e, c in p.raw().items()}
            self.scale_into(out, self.bar_row(w), barp)
        return wrap_raw(out)
