"""The based ring of the lowest cell.

J_0 has Z-basis {t_w : w in the lowest cell} and structure constants given by
the top (degree-N) coefficients of T-basis products; on the lowest cell these
agree with the C-basis constants, so products here never need the KL table.
Also: indecomposable elements (no glued factorization through a third frame)
and the closed-form product for an indecomposable left factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .cells import CellGeometry
from .coxeter import Element, GroupBall, shortlex_key
from .errors import DomainError, InvariantViolation
from .hecke import HeckeAlgebra


class JElement:
    """Integer combination of basis symbols t_w, zero terms dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Element, int]):
        self.terms = {w: c for w, c in terms.items() if c}

    def items(self) -> list[tuple[Element, int]]:
        return sorted(self.terms.items(), key=lambda kv: shortlex_key(kv[0]))

    def coeff(self, w: Element) -> int:
        return self.terms.get(w, 0)

    def to_pairs(self) -> list[list]:
        return [[w.letters(), c] for w, c in self.items()]

    def __eq__(self, other) -> bool:
        return isinstance(other, JElement) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}t[{w}]")
        return " + ".join(parts)


@dataclass(frozen=True)
class Prop42Result:
    """Closed-form product for an indecomposable left factor.

    t_x t_y = t_main + delta * t_extra with delta in {0, 1}; delta is 1
    exactly when x^-1 is a reduced left factor of y.
    """

    x: Element
    y: Element
    main: Element
    delta: int
    extra: Element | None

    def as_element(self) -> JElement:
        terms = {self.main: 1}
        if self.delta:
            terms[self.extra] = terms.get(self.extra, 0) + 1
        return JElement(terms)


class JRing:
    """Products and indecomposability over a fixed ball."""

    def __init__(self, hecke: HeckeAlgebra, geometry: CellGeometry):
        if hecke.group is not geometry.group:
            raise DomainError("hecke algebra and cell geometry disagree on the group")
        self.hecke = hecke
        self.geometry = geometry
        self.group = geometry.group
        self.bound = geometry.bound
        self._top_set = set(geometry.frames.values())

    # -- products ----------------------------------------------------------------

    def j0_product(self, x: Element, y: Element) -> JElement:
        """t_x t_y, the coefficient of t_z being the v^N-coefficient of T_z in T_x T_y."""
        geom = self.geometry
        if not geom.in_lambda(x):
            raise DomainError(f"{x} is not in the lowest cell")
        if not geom.in_lambda(y):
            raise DomainError(f"{y} is not in the lowest cell")
        raw = self.hecke.t_product_raw(x, y)
        terms: dict[Element, int] = {}
        for z, pd in raw.items():
            c = pd.get(self.bound, 0)
            if c:
                if not geom.in_lambda(z):
                    raise InvariantViolation(
                        f"top coefficient at {z} outside the lowest cell in t_{x} t_{y}"
                    )
                terms[z] = c
        return JElement(terms)

    # -- indecomposability ----------------------------------------------------------

    def is_indecomposable(self, x: Element, reading: str = "amalgamated",
                          ball: GroupBall | None = None) -> bool:
        """No factorization x = x1 w_J'' x2 through a third frame, x1, x2 in P minus M.

        The default reading glues the shared w_J'' factor: x = x1'.w_J''.x2'
        length-additively with x1 = x1'.w_J'' and x2 = w_J''.x2'.  The "plain"
        reading searches arbitrary (possibly non-additive) group products with
        both factors inside `ball`.
        """
        geom = self.geometry
        prof = geom.profile(x)
        if prof is None:
            raise DomainError(f"descent sets of {x} are not both frames of the bound")
        if x in self._top_set:
            return False
        j, jp = prof
        if reading == "amalgamated":
            for u, v in self.group.prefix_decompositions(x):
                for j2, wj2 in geom.tops:
                    if not (j2 <= u.right_descents):
                        continue
                    if v.left_descents & j2:
                        continue
                    if u in self._top_set:
                        continue
                    if frozenset(u.left_descents) != j or frozenset(u.right_descents) != j2:
                        continue
                    x2 = self.group.multiply(wj2, v)
                    if x2 in self._top_set:
                        continue
                    if frozenset(x2.left_descents) != j2 or frozenset(x2.right_descents) != jp:
                        continue
                    return False
            return True
        if reading == "plain":
            if ball is None:
                raise DomainError("the plain reading needs a search ball")
            pool: dict[tuple[frozenset, frozenset], list[Element]] = {}
            for u in ball.elements:
                p = geom.profile(u)
                if p is not None and u not in self._top_set:
                    pool.setdefault(p, []).append(u)
            for j2, wj2 in geom.tops:
                for x1 in pool.get((j, j2), ()):
                    # x1 w_J'' x2 = x  <=>  x2 = w_J'' x1^-1 x
                    x2 = self.group.multiply(
                        self.group.multiply(wj2, self.group.inverse(x1)), x
                    )
                    if x2 in ball.index and geom.profile(x2) == (j2, jp) \
                            and x2 not in self._top_set:
                        return False
            return True
        raise DomainError(f"unknown reading {reading!r}")

    def indecomposables(self, ball: GroupBall) -> list[Element]:
        out = []
        for x in ball.elements:
            if self.geometry.profile(x) is not None and x not in self._top_set \
                    and self.is_indecomposable(x):
                out.append(x)
        return out

    def reading_disagreements(self, ball: GroupBall) -> list[Element]:
        """Candidates whose verdict differs between the two readings."""
        out = []
        for x in ball.elements:
            if self.geometry.profile(x) is None or x in self._top_set:
                continue
            a = self.is_indecomposable(x, "amalgamated")
            b = self.is_indecomposable(x, "plain", ball)
            if a != b:
                out.append(x)
        return out

    # -- the closed form ---------------------------------------------------------------

    def prop42_product(self, x: Element, y: Element) -> Prop42Result:
        """t_x t_y = t_{x w_J' y} + delta t_{w_J x y} for indecomposable x."""
        geom = self.geometry
        if geom.report.kind == "affine":
            raise DomainError("the closed form excludes affine groups")
        prof_x = geom.profile(x)
        prof_y = geom.profile(y)
        if prof_x is None:
            raise DomainError(f"descent sets of {x} are not both frames of the bound")
        if prof_y is None:
            raise DomainError(f"descent sets of {y} are not both frames of the bound")
        if not self.is_indecomposable(x):
            raise DomainError(f"{x} is not indecomposable")
        j, jp = prof_x
        if prof_y[0] != jp:
            raise DomainError(
                f"frames do not chain: right frame of {x} differs from left frame of {y}"
            )
        group = self.group
        wj = geom.frames[j]
        wjp = geom.frames[jp]
        main = group.multiply(x, group.multiply(wjp, y))
        if main.length != x.length + y.length - wjp.length:
            raise InvariantViolation(
                f"glued product {x}*{wjp}*{y} lost length-additivity"
            )
        xy = group.multiply(x, y)
        delta = 1 if xy.length == y.length - x.length else 0
        extra = group.multiply(wj, xy) if delta else None
        return Prop42Result(x=x, y=y, main=main, delta=delta, extra=extra)
