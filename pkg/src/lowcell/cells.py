"""The lowest two-sided cell and its left/right cell decomposition.

Writing M for the set of longest elements w_J of finite standard parabolic
subgroups whose weight attains the bound N, the lowest two-sided cell is
Lambda = {x.w_J.y : w_J in M} (dots meaning length-additive products).  Its
left cells are Gamma_{J,y} = B_J w_J y, indexed by a frame J and an admissible
right factor y in U_J; right cells are the mirror image under inversion.

Membership tests here are exact and ball-independent: they rely only on
prefix decompositions of the element at hand, never on truncated tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .coxeter import LETTERS, Element, Group, GroupBall, shortlex_key, spell_word
from .errors import DomainError, InvariantViolation
from .klbasis import KLTable

CellId = tuple[frozenset[int], Element]


def frame_label(j: frozenset[int]) -> str:
    return "".join(LETTERS[g] for g in sorted(j))


def cell_label(cid: CellId) -> str:
    j, y = cid
    return f"{frame_label(j)}:{y.letters()}"


class CellGeometry:
    """Membership and factorization queries for the lowest cell of a group."""

    def __init__(self, group: Group):
        self.group = group
        self.report = group.classification()
        self.bound = self.report.bound
        self.frames = self.report.frames()
        self.tops: list[tuple[frozenset[int], Element]] = sorted(
            self.frames.items(), key=lambda item: sorted(item[0])
        )
        self._lambda: dict[Element, bool] = {}
        self._u: dict[tuple[frozenset[int], Element], bool] = {}
        self._left_id: dict[Element, CellId] = {}
        self._factor: dict[Element, tuple[Element, Element, Element]] = {}

    # -- membership --------------------------------------------------------------

    def has_top_factor(self, w: Element, tops: Iterable[tuple[frozenset[int], Element]]) -> bool:
        """True iff some reduced expression of w passes through some w_J in tops.

        w = x.w_J.y iff some additive prefix u of w ends in w_J, i.e. J is
        contained in the right descent set of u.
        """
        top_list = list(tops)
        if not top_list:
            return False
        shortest = min(wj.length for _, wj in top_list)
        if w.length < shortest:
            return False
        for u, _ in self.group.prefix_decompositions(w):
            rd = u.right_descents
            for j, _wj in top_list:
                if j <= rd:
                    return True
        return False

    def in_lambda(self, w: Element) -> bool:
        cached = self._lambda.get(w)
        if cached is None:
            cached = self.has_top_factor(w, self.tops)
            self._lambda[w] = cached
        return cached

    def b_member(self, j: frozenset[int], x: Element) -> bool:
        return not (x.right_descents & j)

    def u_member(self, j: frozenset[int], y: Element) -> bool:
        key = (j, y)
        cached = self._u.get(key)
        if cached is not None:
            return cached
        ok = not (y.left_descents & j)
        if ok:
            wj = self.frames[j]
            for s in j:
                swjy = self.group.multiply(
                    self.group.multiply(self.group.generators[s], wj), y
                )
                if self.in_lambda(swjy):
                    ok = False
                    break
        self._u[key] = ok
        return ok

    def cell_frame(self, j: frozenset[int], ball: GroupBall) -> tuple[list[Element], list[Element]]:
        """(B_J, U_J) restricted to the ball, ShortLex order."""
        if j not in self.frames:
            raise DomainError(f"{frame_label(j)} is not a frame of the bound")
        b = [x for x in ball.elements if self.b_member(j, x)]
        u = [y for y in ball.elements if self.u_member(j, y)]
        return b, u

    # -- cell identification -----------------------------------------------------

    def left_cell_id(self, w: Element) -> CellId:
        """The unique (J, y) with w in B_J w_J y; uniqueness is enforced."""
        cached = self._left_id.get(w)
        if cached is not None:
            return cached
        if not self.in_lambda(w):
            raise DomainError(f"{w} is not in the lowest cell")
        ids = set()
        for u, y in self.group.prefix_decompositions(w):
            rd = u.right_descents
            for j, _wj in self.tops:
                if j <= rd and self.u_member(j, y):
                    # u = x.w_J additive, so x avoids J on the right automatically
                    ids.add((j, y))
        if len(ids) != 1:
            raise InvariantViolation(
                f"left-cell id of {w} is not unique: "
                f"{sorted(cell_label(c) for c in ids)}"
            )
        cid = ids.pop()
        self._left_id[w] = cid
        return cid

    def right_cell_id(self, w: Element) -> tuple[Element, frozenset[int]]:
        """The unique (x, J) with w in x w_J B_J^{-1} (mirror of left_cell_id)."""
        j, y = self.left_cell_id(self.group.inverse(w))
        return self.group.inverse(y), j

    def lemma_factorize(self, w: Element) -> tuple[Element, Element, Element]:
        """The unique triple (x, p, y): w = x.p.y, frames(p) top, x in U_J^-1, y in U_J'."""
        cached = self._factor.get(w)
        if cached is not None:
            return cached
        if not self.in_lambda(w):
            raise DomainError(f"{w} is not in the lowest cell")
        group = self.group
        found = []
        for x, rest in group.prefix_decompositions(w):
            if not self.u_member_inv(x):
                continue
            for p, y in group.prefix_decompositions(rest):
                j = frozenset(p.left_descents)
                jp = frozenset(p.right_descents)
                if j not in self.frames or jp not in self.frames:
                    continue
                if self.u_member(j, group.inverse(x)) and self.u_member(jp, y):
                    found.append((x, p, y))
        if len(found) != 1:
            raise InvariantViolation(
                f"canonical factorization of {w} is not unique: {found}"
            )
        self._factor[w] = found[0]
        return found[0]

    def u_member_inv(self, x: Element) -> bool:
        """True iff x^-1 lies in U_J for some frame J (cheap prefilter)."""
        xi = self.group.inverse(x)
        return any(self.u_member(j, xi) for j, _ in self.tops)

    def profile(self, x: Element) -> tuple[frozenset[int], frozenset[int]] | None:
        """(J, J') if both descent sets of x are exactly frames of the bound."""
        j = frozenset(x.left_descents)
        jp = frozenset(x.right_descents)
        if j in self.frames and jp in self.frames:
            return j, jp
        return None

    def witness_pair(self, w: Element) -> tuple[Element, Element]:
        """A pair (u1, u2) with u1 u2 passing through w at top degree N.

        From w = x.p.y the pair (x.p, w_J'.y) works: the T-product's q = w_J'
        term contributes exactly T_w with a degree-N coefficient.  Both parts
        lie in the radius-l(w) ball.
        """
        x, p, y = self.lemma_factorize(w)
        jp = frozenset(p.right_descents)
        u1 = self.group.multiply(x, p)
        u2 = self.group.multiply(self.frames[jp], y)
        return u1, u2

    # -- enumeration ---------------------------------------------------------------

    def lambda_members(self, ball: GroupBall) -> list[Element]:
        return [w for w in ball.elements if self.in_lambda(w)]

    def enumerate_left_cells(self, ball: GroupBall) -> dict[CellId, list[Element]]:
        cells: dict[CellId, list[Element]] = {}
        for w in self.lambda_members(ball):
            cells.setdefault(self.left_cell_id(w), []).append(w)
        return dict(sorted(cells.items(), key=lambda kv: (sorted(kv[0][0]), kv[0][1].sort_key())))

    def cell_count_profile(self, ball: GroupBall, radii: Iterable[int]) -> list[tuple[int, int]]:
        """(radius, number of distinct left-cell ids realized) per radius."""
        out = []
        members = self.lambda_members(ball)
        for radius in radii:
            ids = {self.left_cell_id(w) for w in members if w.length <= radius}
            out.append((radius, len(ids)))
        return out

    def expected_left_cell_count(self) -> tuple[str, int | None]:
        """Exact left-cell count predicted by the classification case split.

        Returns ("finite", n) or ("infinite", None).
        """
        report = self.report
        if report.kind == "finite":
            return ("finite", 1)
        if report.kind == "affine":
            return ("finite", report.w0_order)
        config = self.group.config
        orders = {
            frozenset((0, 1)): config.m_sr,
            frozenset((1, 2)): config.m_st,
            frozenset((0, 2)): config.m_rt,
        }
        weights = config.weights()
        inf_bonds = [pair for pair, m in orders.items() if m is None]
        if len(inf_bonds) == 3:
            a, b, c = sorted(weights, reverse=True)
            if a == b == c:
                return ("finite", 3)
            if a == b:
                return ("finite", 4)
            return ("infinite", None)
        if len(inf_bonds) == 2:
            (pair, m) = next((p, m) for p, m in orders.items() if m is not None)
            middle = next(g for g in range(3) if g not in pair)
            w_pair = self.group.longest_element(sorted(pair))
            if w_pair.weight > weights[middle]:
                return ("infinite", None)
            return ("finite", 2 * m)
        if len(inf_bonds) == 1:
            pair = inf_bonds[0]
            finite_orders = [m for p, m in orders.items() if p != pair]
            if finite_orders == [2, 2]:
                return ("finite", 2)
            return ("infinite", None)
        return ("infinite", None)

    # -- lowest-cell data of standard parabolic subgroups ---------------------------

    def parabolic_tops(self, letters: frozenset[int]) -> tuple[int, list[tuple[frozenset[int], Element]]]:
        """(N_I, M_I) for the standard parabolic subgroup on `letters`."""
        group = self.group
        entries: list[tuple[frozenset[int], Element, int]] = []
        for g in sorted(letters):
            entries.append((frozenset((g,)), group.generators[g], group.config.weight(g)))
        for a in sorted(letters):
            for b in sorted(letters):
                if a < b and group.config.order(a, b) is not None:
                    w = group.longest_element((a, b))
                    entries.append((frozenset((a, b)), w, w.weight))
        if len(letters) == 3:
            report = group.classification()
            if report.kind == "finite":
                w0 = group.longest_element(range(3))
                entries.append((frozenset(range(3)), w0, w0.weight))
        if not entries:
            return 0, []
        bound = max(wt for _, _, wt in entries)
        return bound, [(j, w) for j, w, wt in entries if wt == bound]


@dataclass(frozen=True)
class CellAtlas:
    """A ball's worth of lowest-cell data, immutable once built."""

    radius: int
    bound: int
    members: tuple[Element, ...]
    cells: tuple[tuple[CellId, tuple[Element, ...]], ...]
    b_frames: tuple[tuple[frozenset[int], tuple[Element, ...]], ...]
    u_frames: tuple[tuple[frozenset[int], tuple[Element, ...]], ...]
    left_ids: tuple[tuple[Element, CellId], ...]
    right_ids: tuple[tuple[Element, tuple[Element, frozenset[int]]], ...]
    delta: tuple[tuple[Element, tuple[int, int]], ...]
    d_set: tuple[Element, ...]
    distinguished: tuple[tuple[CellId, Element | None], ...]

    @classmethod
    def build(cls, geometry: CellGeometry, ball: GroupBall, kl: KLTable) -> "CellAtlas":
        group = geometry.group
        members = geometry.lambda_members(ball)
        cells = geometry.enumerate_left_cells(ball)
        b_frames = []
        u_frames = []
        for j, _wj in geometry.tops:
            b, u = geometry.cell_frame(j, ball)
            b_frames.append((j, tuple(b)))
            u_frames.append((j, tuple(u)))
        left_ids = [(w, geometry.left_cell_id(w)) for w in members]
        right_ids = [(w, geometry.right_cell_id(w)) for w in members]
        delta = []
        d_set = []
        for w in members:
            p = kl.p_poly(group.identity, w)
            if p.is_zero():
                raise InvariantViolation(f"p_(e,{w}) vanished")
            # p_(e,z) = n_z v^(-Delta) + lower terms, so Delta is minus the top degree
            dlt = -p.degree()
            n_z = p.leading_coeff()
            delta.append((w, (dlt, n_z)))
            if dlt == geometry.bound:
                d_set.append(w)
        d_by_cell: dict[CellId, list[Element]] = {cid: [] for cid in cells}
        for w, (dlt, _n) in delta:
            if dlt == geometry.bound:
                d_by_cell[geometry.left_cell_id(w)].append(w)
        distinguished = []
        for cid in cells:
            ds = d_by_cell[cid]
            if len(ds) > 1:
                raise InvariantViolation(
                    f"cell {cell_label(cid)} holds several distinguished elements: {ds}"
                )
            distinguished.append((cid, ds[0] if ds else None))
        return cls(
            radius=ball.radius,
            bound=geometry.bound,
            members=tuple(members),
            cells=tuple((cid, tuple(ws)) for cid, ws in cells.items()),
            b_frames=tuple(b_frames),
            u_frames=tuple(u_frames),
            left_ids=tuple(left_ids),
            right_ids=tuple(right_ids),
            delta=tuple(delta),
            d_set=tuple(d_set),
            distinguished=tuple(distinguished),
        )

    def to_dict(self) -> dict:
        dist = dict(self.distinguished)
        return {
            "radius": self.radius,
            "bound": self.bound,
            "members": [w.letters() for w in self.members],
            "cells": [
                {
                    "id": cell_label(cid),
                    "frame": frame_label(cid[0]),
                    "y": cid[1].letters(),
                    "members": [w.letters() for w in ws],
                    "distinguished": dist[cid].letters() if dist[cid] is not None else None,
                }
                for cid, ws in self.cells
            ],
            "b_frames": {frame_label(j): [x.letters() for x in xs] for j, xs in self.b_frames},
            "u_frames": {frame_label(j): [y.letters() for y in ys] for j, ys in self.u_frames},
            "left_ids": {w.letters(): cell_label(cid) for w, cid in self.left_ids},
            "right_ids": {
                w.letters(): f"{x.letters()}:{frame_label(j)}" for w, (x, j) in self.right_ids
            },
            "delta": {w.letters(): [d, n] for w, (d, n) in self.delta},
            "d_set": [w.letters() for w in self.d_set],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
