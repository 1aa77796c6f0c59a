"""The canonical (C) basis and its structure constants.

C_w = sum_{x <= w} p_{x,w} T_x is the unique bar-fixed element with
p_{w,w} = 1 and deg p_{x,w} < 0 for x < w.  The table of p polynomials is
solved top-down from the bar matrix: writing C_w = T_w + sum p_x T_x and
imposing bar(C_w) = C_w forces, at each support element x (taken in
decreasing ShortLex order so every contribution is already final),
p_x - bar(p_x) = -q_x where q_x collects the bar-row contributions of the
longer terms; the unique degree-negative solution is the negative part of
-q_x.  Skew-symmetry of q_x is asserted, not assumed.

Structure constants h_{x,y,z} (coefficient of C_z in C_x C_y) come from
multiplying in the T basis and greedily converting back.  The conversion
and the products need the ball to contain the full support, i.e. radius
at least l(x) + l(y).
"""

from __future__ import annotations

from typing import Mapping

from .coxeter import Element, GroupBall, shortlex_key
from .errors import DomainError, InvariantViolation, OutOfBallError
from .hecke import HeckeAlgebra, HeckeElement, Raw, wrap_raw
from .laurent import NEG_INF, LaurentPoly, add_into, mul_raw


class KLTable:
    """p polynomials, C products and their structure constants over a ball."""

    def __init__(self, ball: GroupBall, hecke: HeckeAlgebra | None = None):
        self.ball = ball
        self.group = ball.group
        self.hecke = hecke if hecke is not None else HeckeAlgebra(ball)
        if self.hecke.ball is not ball:
            raise DomainError("hecke algebra must live on the same ball")
        self.p: dict[Element, dict[Element, LaurentPoly]] = {}
        self._hrow: dict[tuple[Element, Element], dict[Element, LaurentPoly]] = {}
        self._build()

    def _build(self) -> None:
        for w in self.ball.elements:
            row = self.hecke.bar_row(w)
            pending: Raw = {}
            for x, pd in row.items():
                if x != w:
                    pending[x] = dict(pd)
            solved: dict[Element, LaurentPoly] = {w: LaurentPoly.one()}
            while pending:
                x = max(pending, key=shortlex_key)
                q = pending.pop(x)
                for e, c in q.items():
                    if e == 0 or q.get(-e, 0) != -c:
                        raise InvariantViolation(
                            f"bar-fixing lost skew-symmetry at x={x}, w={w}: {q}"
                        )
                neg = {e: c for e, c in q.items() if e < 0}
                if not neg:
                    continue
                solved[x] = LaurentPoly(neg)
                # C_w gains p_x T_x; push bar(p_x) * bar-row(x) into the residue
                barp = {-e: c for e, c in neg.items()}
                for u, rpd in self.hecke.bar_row(x).items():
                    if u == x:
                        continue
                    slot = pending.setdefault(u, {})
                    add_into(slot, mul_raw(barp, rpd))
                    if not slot:
                        del pending[u]
            self.p[w] = solved

    # -- the basis ------------------------------------------------------------

    def p_poly(self, x: Element, w: Element) -> LaurentPoly:
        row = self.p.get(w)
        if row is None:
            raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
        return row.get(x, LaurentPoly.zero())

    def c_element(self, w: Element) -> HeckeElement:
        row = self.p.get(w)
        if row is None:
            raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
        return HeckeElement(row)

    def c_raw(self, w: Element) -> Raw:
        row = self.p.get(w)
        if row is None:
            raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
        return {x: dict(p.raw()) for x, p in row.items()}

    def to_c(self, raw: Raw) -> dict[Element, LaurentPoly]:
        """Rewrite a T-basis element in the C basis (greedy elimination)."""
        work: Raw = {w: dict(pd) for w, pd in raw.items() if pd}
        out: dict[Element, LaurentPoly] = {}
        while work:
            z = max(work, key=shortlex_key)
            cz = work.pop(z)
            row = self.p.get(z)
            if row is None:
                raise OutOfBallError(
                    f"conversion support reaches {z}, outside the radius-{self.ball.radius} ball"
                )
            out[z] = LaurentPoly(cz)
            for x, px in row.items():
                if x == z:
                    continue
                slot = work.setdefault(x, {})
                add_into(slot, mul_raw(cz, px.raw()), sign=-1)
                if not slot:
                    del work[x]
        return out

    # -- C products -------------------------------------------------------------

    def c_product_raw(self, x: Element, y: Element) -> Raw:
        return self.hecke.multiply_raw(self.c_raw(x), self.c_raw(y))

    def c_product(self, x: Element, y: Element) -> HeckeElement:
        return wrap_raw(self.c_product_raw(x, y))

    def h_row(self, x: Element, y: Element) -> dict[Element, LaurentPoly]:
        """C_x C_y expanded in the C basis: z -> h_{x,y,z}."""
        key = (x, y)
        row = self._hrow.get(key)
        if row is None:
            row = self.to_c(self.c_product_raw(x, y))
            self._hrow[key] = row
        return row

    def h_poly(self, x: Element, y: Element, z: Element) -> LaurentPoly:
        return self.h_row(x, y).get(z, LaurentPoly.zero())

    def gamma(self, x: Element, y: Element, z: Element, a_z: int) -> int:
        """pi_{a_z}(h_{x,y,z^-1}), the based-ring constant at a-value a_z."""
        return self.h_poly(x, y, self.group.inverse(z)).coeff(a_z)

    def a_lower_bound(self, w: Element, witness_radius: int):
        """max deg h_{x,y,w} over x, y in the witness ball, with a witness pair.

        Returns (value, (x, y)) where value is -inf if every product misses w.
        The table's ball must cover 2 * witness_radius.
        """
        pairs_ball = [u for u in self.ball.elements if u.length <= witness_radius]
        if witness_radius > self.ball.radius:
            raise OutOfBallError(
                f"witness radius {witness_radius} exceeds ball radius {self.ball.radius}"
            )
        best = NEG_INF
        witness = None
        for x in pairs_ball:
            for y in pairs_ball:
                d = self.h_poly(x, y, w).degree()
                if d > best:
                    best = d
                    witness = (x, y)
        return best, witness

    # -- transfer elements -------------------------------------------------------

    def left_transfer(self, w_j: Element, x: Element) -> HeckeElement:
        """E_x: the left factor carrying C_{w_J} to C_{x w_J}.

        Requires l(x w_J) = l(x) + l(w_J); sums p_{x' w_J, x w_J} T_{x'} over
        x' <= x with x' w_J likewise additive.
        """
        group = self.group
        w = group.multiply(x, w_j)
        if w.length != x.length + w_j.length:
            raise DomainError(f"l({x}*{w_j}) is not additive")
        row = self.p.get(w)
        if row is None:
            raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
        coeffs: dict[Element, LaurentPoly] = {}
        for xp in group.bruhat_lower(x):
            u = group.multiply(xp, w_j)
            if u.length != xp.length + w_j.length:
                continue
            p = row.get(u)
            if p is not None:
                coeffs[xp] = p
        return HeckeElement(coeffs)

    def right_transfer(self, w_j: Element, y: Element) -> HeckeElement:
        """F_y: the right factor carrying C_{w_J} to C_{w_J y} (mirror of E)."""
        group = self.group
        w = group.multiply(w_j, y)
        if w.length != w_j.length + y.length:
            raise DomainError(f"l({w_j}*{y}) is not additive")
        row = self.p.get(w)
        if row is None:
            raise OutOfBallError(f"{w} is outside the radius-{self.ball.radius} ball")
        coeffs: dict[Element, LaurentPoly] = {}
        for yp in group.bruhat_lower(y):
            u = group.multiply(w_j, yp)
            if u.length != w_j.length + yp.length:
                continue
            p = row.get(u)
            if p is not None:
                coeffs[yp] = p
        return HeckeElement(coeffs)

    # -- serialization ------------------------------------------------------------

    def to_payload(self) -> dict:
        rows = []
        for w in self.ball.elements:
            row = self.p[w]
            rows.append([
                w.letters(),
                [[x.letters(), p.to_pairs()]
                 for x, p in sorted(row.items(), key=lambda kv: shortlex_key(kv[0]))],
            ])
        return {"radius": self.ball.radius, "p": rows}

    @classmethod
    def from_payload(cls, ball: GroupBall, payload: dict,
                     hecke: HeckeAlgebra | None = None) -> "KLTable":
        table = cls.__new__(cls)
        table.ball = ball
        table.group = ball.group
        table.hecke = hecke if hecke is not None else HeckeAlgebra(ball)
        table.p = {}
        table._hrow = {}
        for wl, row in payload["p"]:
            w = ball.group.element(wl)
            table.p[w] = {
                ball.group.element(xl): LaurentPoly.from_pairs(pairs)
                for xl, pairs in row
            }
        return table
